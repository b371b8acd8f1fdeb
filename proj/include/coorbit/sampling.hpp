#pragma once

// Seeded random draws used by property tests and the CLI.

#include <Eigen/Dense>

#include <cmath>
#include <random>

namespace coorbit {

class Sampler {
 public:
  explicit Sampler(std::uint64_t seed = 0) : rng_(seed) {}

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
  double normal() { return std::normal_distribution<double>(0.0, 1.0)(rng_); }

  template <int N>
  Eigen::Matrix<double, N, 1> vec(double lo = -1, double hi = 1) {
    Eigen::Matrix<double, N, 1> v;
    for (int i = 0; i < N; ++i) v(i) = uniform(lo, hi);
    return v;
  }

  Eigen::VectorXd vec(int n, double lo = -1, double hi = 1) {
    Eigen::VectorXd v(n);
    for (int i = 0; i < n; ++i) v(i) = uniform(lo, hi);
    return v;
  }

  // Uniform direction scaled to a speed in [0, max_speed).
  Eigen::Vector3d velocity(double max_speed = 0.9) {
    Eigen::Vector3d d(normal(), normal(), normal());
    d.normalize();
    return d * uniform(0.0, max_speed);
  }

  // Haar-ish rotation from the QR of a Gaussian matrix, det forced to +1.
  Eigen::Matrix3d rotation() {
    Eigen::Matrix3d g;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) g(i, j) = normal();
    Eigen::HouseholderQR<Eigen::Matrix3d> qr(g);
    Eigen::Matrix3d q = qr.householderQ();
    if (q.determinant() < 0) q.col(0) *= -1;
    return q;
  }

  std::mt19937_64& engine() { return rng_; }

 private:
  std::mt19937_64 rng_;
};

}  // namespace coorbit
