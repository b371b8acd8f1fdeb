#pragma once

// Spacetime fields, the Levi-Civita connection with its fifth row, and
// charged-particle motion.

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <functional>
#include <sstream>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include "coorbit/errors.hpp"
#include "coorbit/hyperlin.hpp"

namespace coorbit {

using Vec4 = Vec<4>;
using Mat4 = Mat<4>;
// t[a](b, c)
using Rank3 = std::array<Mat4, 4>;
// t[a][b](c, d)
using Rank4 = std::array<Rank3, 4>;

inline Rank3 zero_rank3() {
  Rank3 t;
  t.fill(Mat4::Zero());
  return t;
}

inline Rank4 zero_rank4() {
  Rank4 t;
  t.fill(zero_rank3());
  return t;
}

// Metric and covector potential A* as callables. Derivative callbacks are
// optional; missing ones fall back to central differences of the next lower order.
struct SpacetimeFields {
  std::string name = "custom";
  std::function<Mat4(const Vec4&)> metric;
  std::function<Vec4(const Vec4&)> potential;
  // [r](i, j) = d_r G_ij
  std::function<Rank3(const Vec4&)> metric_d;
  // [r][s](i, j) = d_r d_s G_ij
  std::function<Rank4(const Vec4&)> metric_dd;
  // (r, i) = d_r A_i
  std::function<Mat4(const Vec4&)> potential_d;
  // [r](s, i) = d_r d_s A_i
  std::function<Rank3(const Vec4&)> potential_dd;
  double fd_step = 1e-4;
  // Combine steps h and h/2 as (4 D(h/2) - D(h)) / 3 for O(h^4) differences.
  bool richardson = false;

  bool analytic() const { return metric_d && metric_dd && potential_d && potential_dd; }

  double step_at(const Vec4& x) const { return fd_step * std::max(1.0, x.cwiseAbs().maxCoeff()); }

  Mat4 G(const Vec4& x) const {
    const Mat4 g = metric(x);
    if ((g - g.transpose()).cwiseAbs().maxCoeff() > 1e-12) throw validation_error("metric is not symmetric");
    if (!(std::abs(g.determinant()) > 1e-10)) throw numerical_error("singular metric");
    return g;
  }
  Mat4 G_inv(const Vec4& x) const { return G(x).inverse(); }
  Vec4 A(const Vec4& x) const { return potential ? potential(x) : Vec4::Zero(); }

  Rank3 dG(const Vec4& x) const {
    if (metric_d) return metric_d(x);
    Rank3 t;
    for (int r = 0; r < 4; ++r)
      t[r] = difference([&](const Vec4& y) { return metric(y); }, x, r);
    return t;
  }

  Rank4 ddG(const Vec4& x) const {
    if (metric_dd) return metric_dd(x);
    Rank4 t;
    for (int s = 0; s < 4; ++s)
      for (int r = 0; r < 4; ++r)
        t[r][s] = difference([&](const Vec4& y) { return dG(y)[s]; }, x, r);
    return t;
  }

  Mat4 dA(const Vec4& x) const {
    if (potential_d) return potential_d(x);
    if (!potential) return Mat4::Zero();
    Mat4 t;
    for (int r = 0; r < 4; ++r)
      t.row(r) = difference([&](const Vec4& y) { return potential(y); }, x, r).transpose();
    return t;
  }

  Rank3 ddA(const Vec4& x) const {
    if (potential_dd) return potential_dd(x);
    Rank3 t;
    for (int r = 0; r < 4; ++r)
      t[r] = difference([&](const Vec4& y) { return dA(y); }, x, r);
    return t;
  }

 private:
  template <class Fn>
  auto difference(Fn&& fn, const Vec4& x, int r) const -> std::decay_t<std::invoke_result_t<Fn&, const Vec4&>> {
    using Out = std::decay_t<std::invoke_result_t<Fn&, const Vec4&>>;
    const double h = step_at(x);
    auto central = [&](double step) -> Out {
      const Vec4 e = step * Vec4::Unit(r);
      return (fn(x + e) - fn(x - e)) / (2 * step);
    };
    if (!richardson) return central(h);
    return (4.0 * central(h / 2) - central(h)) / 3.0;
  }
};

// Drop analytic callbacks so every derivative comes from differences.
inline SpacetimeFields finite_difference_mode(SpacetimeFields f, double step) {
  f.metric_d = nullptr;
  f.metric_dd = nullptr;
  f.potential_d = nullptr;
  f.potential_dd = nullptr;
  f.fd_step = step;
  return f;
}

namespace presets {

inline Mat4 eta() { return minkowski().gram(); }

inline SpacetimeFields with_flat_metric(SpacetimeFields f) {
  f.metric = [](const Vec4&) { return eta(); };
  f.metric_d = [](const Vec4&) { return zero_rank3(); };
  f.metric_dd = [](const Vec4&) { return zero_rank4(); };
  return f;
}

inline SpacetimeFields flat() {
  SpacetimeFields f;
  f.name = "flat";
  f = with_flat_metric(f);
  f.potential = [](const Vec4&) { return Vec4::Zero(); };
  f.potential_d = [](const Vec4&) { return Mat4::Zero(); };
  f.potential_dd = [](const Vec4&) { return zero_rank3(); };
  return f;
}

// A = (0, -B0 y / 2, B0 x / 2, 0) as a vector, so curl A = B0 e_z.
// The covector is A* = eta A = (0, B0 y / 2, -B0 x / 2, 0).
inline SpacetimeFields uniform_b(double b0) {
  SpacetimeFields f = flat();
  f.name = "uniform_b";
  f.potential = [b0](const Vec4& x) { return Vec4(0, 0.5 * b0 * x(2), -0.5 * b0 * x(1), 0); };
  f.potential_d = [b0](const Vec4&) {
    Mat4 d = Mat4::Zero();
    d(2, 1) = 0.5 * b0;   // d_y A*_x
    d(1, 2) = -0.5 * b0;  // d_x A*_y
    return d;
  };
  return f;
}

// phi = k / r with r the spatial radius.
inline SpacetimeFields coulomb(double k) {
  SpacetimeFields f = flat();
  f.name = "coulomb";
  f.potential = [k](const Vec4& x) { return Vec4(k / x.tail<3>().norm(), 0, 0, 0); };
  f.potential_d = [k](const Vec4& x) {
    const Eigen::Vector3d r = x.tail<3>();
    const double n = r.norm();
    Mat4 d = Mat4::Zero();
    d.block<3, 1>(1, 0) = -k * r / (n * n * n);
    return d;
  };
  f.potential_dd = [k](const Vec4& x) {
    const Eigen::Vector3d r = x.tail<3>();
    const double n = r.norm();
    Rank3 t = zero_rank3();
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b)
        t[a + 1](b + 1, 0) = k * (3 * r(a) * r(b) / std::pow(n, 5) - (a == b ? 1.0 : 0.0) / std::pow(n, 3));
    return t;
  };
  return f;
}

// Interior of a uniformly charged ball: phi = rho_e (3 R^2 - r^2) / (6 eps0), Coulomb outside.
inline SpacetimeFields charged_ball(double rho_e, double radius, double eps0) {
  SpacetimeFields f = flat();
  f.name = "charged_ball";
  const double charge_k = rho_e * radius * radius * radius / (3 * eps0);  // Q / (4 pi eps0)
  const SpacetimeFields outside = coulomb(charge_k);
  const double c = rho_e / (6 * eps0);
  f.potential = [=](const Vec4& x) {
    const double r2 = x.tail<3>().squaredNorm();
    if (r2 >= radius * radius) return outside.potential(x);
    return Vec4(c * (3 * radius * radius - r2), 0, 0, 0);
  };
  f.potential_d = [=](const Vec4& x) {
    if (x.tail<3>().squaredNorm() >= radius * radius) return outside.potential_d(x);
    Mat4 d = Mat4::Zero();
    d.block<3, 1>(1, 0) = -2 * c * x.tail<3>();
    return d;
  };
  f.potential_dd = [=](const Vec4& x) {
    if (x.tail<3>().squaredNorm() >= radius * radius) return outside.potential_dd(x);
    Rank3 t = zero_rank3();
    for (int a = 1; a < 4; ++a) t[a](a, 0) = -2 * c;
    return t;
  };
  return f;
}

// G = exp(2 c.X) eta.
inline SpacetimeFields conformal(const Vec4& c) {
  SpacetimeFields f = flat();
  f.name = "conformal";
  f.metric = [c](const Vec4& x) { return std::exp(2 * c.dot(x)) * eta(); };
  f.metric_d = [c](const Vec4& x) {
    Rank3 t;
    const double e = std::exp(2 * c.dot(x));
    for (int r = 0; r < 4; ++r) t[r] = 2 * c(r) * e * eta();
    return t;
  };
  f.metric_dd = [c](const Vec4& x) {
    Rank4 t;
    const double e = std::exp(2 * c.dot(x));
    for (int r = 0; r < 4; ++r)
      for (int s = 0; s < 4; ++s) t[r][s] = 4 * c(r) * c(s) * e * eta();
    return t;
  };
  return f;
}

// Static weak field diag(1 + 2 phi, -(1 - 2 phi) I3), phi = -m / sqrt(r^2 + a^2);
// the depth at the centre is m / a.
inline SpacetimeFields weak_field(double m, double a) {
  SpacetimeFields f = flat();
  f.name = "weak_field";
  const Vec4 w(2, 2, 2, 2);  // d G_ii / d phi
  auto phi = [m, a](const Vec4& x) { return -m / std::sqrt(x.tail<3>().squaredNorm() + a * a); };
  f.metric = [phi](const Vec4& x) {
    const double p = phi(x);
    return Vec4(1 + 2 * p, -(1 - 2 * p), -(1 - 2 * p), -(1 - 2 * p)).asDiagonal().toDenseMatrix().eval();
  };
  f.metric_d = [m, a, w](const Vec4& x) {
    const Eigen::Vector3d r = x.tail<3>();
    const double s = std::sqrt(r.squaredNorm() + a * a);
    Rank3 t = zero_rank3();
    for (int k = 0; k < 3; ++k) t[k + 1] = (m * r(k) / (s * s * s)) * w.asDiagonal().toDenseMatrix();
    return t;
  };
  f.metric_dd = [m, a, w](const Vec4& x) {
    const Eigen::Vector3d r = x.tail<3>();
    const double s = std::sqrt(r.squaredNorm() + a * a);
    Rank4 t = zero_rank4();
    for (int k = 0; k < 3; ++k)
      for (int l = 0; l < 3; ++l) {
        const double h = m * ((k == l ? 1.0 : 0.0) / std::pow(s, 3) - 3 * r(k) * r(l) / std::pow(s, 5));
        t[k + 1][l + 1] = h * w.asDiagonal().toDenseMatrix();
      }
    return t;
  };
  return f;
}

// Coordinates (t, theta, phi, z): diag(1, -r^2, -r^2 sin^2 theta, -1).
inline SpacetimeFields sphere(double r) {
  SpacetimeFields f = flat();
  f.name = "sphere";
  f.metric = [r](const Vec4& x) {
    Mat4 g = Mat4::Zero();
    g(0, 0) = 1;
    g(1, 1) = -r * r;
    g(2, 2) = -r * r * std::sin(x(1)) * std::sin(x(1));
    g(3, 3) = -1;
    return g;
  };
  f.metric_d = [r](const Vec4& x) {
    Rank3 t = zero_rank3();
    t[1](2, 2) = -r * r * std::sin(2 * x(1));
    return t;
  };
  f.metric_dd = [r](const Vec4& x) {
    Rank4 t = zero_rank4();
    t[1][1](2, 2) = -2 * r * r * std::cos(2 * x(1));
    return t;
  };
  return f;
}

// Metric of `base` with the potential of `src`.
inline SpacetimeFields with_potential(SpacetimeFields base, const SpacetimeFields& src) {
  base.name = base.name + "+" + src.name;
  base.potential = src.potential;
  base.potential_d = src.potential_d;
  base.potential_dd = src.potential_dd;
  return base;
}

}  // namespace presets

// Gamma^k_ij = G^kr (d_j G_ir + d_i G_jr - d_r G_ij) / 2, stored as gamma[k](i, j).
inline Rank3 christoffel(const SpacetimeFields& f, const Vec4& x) {
  const Mat4 gi = f.G_inv(x);
  const Rank3 d = f.dG(x);
  Rank3 lower;  // Gamma_r,ij
  for (int r = 0; r < 4; ++r)
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) lower[r](i, j) = 0.5 * (d[j](i, r) + d[i](j, r) - d[r](i, j));
  Rank3 gamma = zero_rank3();
  for (int k = 0; k < 4; ++k)
    for (int r = 0; r < 4; ++r) gamma[k] += gi(k, r) * lower[r];
  return gamma;
}

// [s][k](i, j) = d_s Gamma^k_ij from second metric derivatives.
inline Rank4 christoffel_d(const SpacetimeFields& f, const Vec4& x) {
  const Mat4 gi = f.G_inv(x);
  const Rank3 d = f.dG(x);
  const Rank4 dd = f.ddG(x);
  Rank4 out = zero_rank4();
  for (int s = 0; s < 4; ++s) {
    const Mat4 dgi = -gi * d[s] * gi;
    for (int k = 0; k < 4; ++k)
      for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
          double acc = 0;
          for (int r = 0; r < 4; ++r) {
            const double low = 0.5 * (d[j](i, r) + d[i](j, r) - d[r](i, j));
            const double dlow = 0.5 * (dd[s][j](i, r) + dd[s][i](j, r) - dd[s][r](i, j));
            acc += dgi(k, r) * low + gi(k, r) * dlow;
          }
          out[s][k](i, j) = acc;
        }
  }
  return out;
}

// Gamma(U) with entries Gamma^k_ij U^i, so (Gamma(U) V)^k = Gamma^k_ij U^i V^j.
inline Mat4 contract_first(const Rank3& gamma, const Vec4& u) {
  Mat4 m;
  for (int k = 0; k < 4; ++k) m.row(k) = (u.transpose() * gamma[k]);
  return m;
}

// max |d_i G_jk - G_jm Gamma^m_ik - G_mk Gamma^m_ij|
inline double metric_compatibility_residual(const SpacetimeFields& f, const Vec4& x) {
  const Mat4 g = f.G(x);
  const Rank3 d = f.dG(x);
  const Rank3 gamma = christoffel(f, x);
  double worst = 0;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      for (int k = 0; k < 4; ++k) {
        double v = d[i](j, k);
        for (int m = 0; m < 4; ++m) v -= g(j, m) * gamma[m](i, k) + g(m, k) * gamma[m](i, j);
        worst = std::max(worst, std::abs(v));
      }
  return worst;
}

// F_ij = d_i A_j - d_j A_i
inline Mat4 em_field(const SpacetimeFields& f, const Vec4& x) {
  const Mat4 d = f.dA(x);
  return d - d.transpose();
}

struct ElectricMagnetic {
  Eigen::Vector3d E;
  Eigen::Vector3d B;
};

// E = -grad phi - d_t A, B = curl A for the vector A = G^-1 A* = (phi, A).
inline ElectricMagnetic electric_magnetic(const SpacetimeFields& f, const Vec4& x) {
  const Mat4 gi = f.G_inv(x);
  const Rank3 d = f.dG(x);
  const Vec4 a_low = f.A(x);
  const Mat4 da_low = f.dA(x);
  // (r, i) = d_r A^i
  Mat4 da;
  for (int r = 0; r < 4; ++r) da.row(r) = (-gi * d[r] * gi * a_low + gi * da_low.row(r).transpose()).transpose();
  ElectricMagnetic out;
  for (int k = 0; k < 3; ++k) out.E(k) = -da(k + 1, 0) - da(0, k + 1);
  out.B(0) = da(2, 3) - da(3, 2);
  out.B(1) = da(3, 1) - da(1, 3);
  out.B(2) = da(1, 2) - da(2, 1);
  return out;
}

// nabla_i A_j = d_i A_j - Gamma^k_ij A_k, stored (i, j).
inline Mat4 covariant_dA(const SpacetimeFields& f, const Vec4& x) {
  const Rank3 gamma = christoffel(f, x);
  const Vec4 a = f.A(x);
  Mat4 out = f.dA(x);
  for (int k = 0; k < 4; ++k) out -= a(k) * gamma[k];
  return out;
}

// Gamma^5_ij = F_ij - 2 nabla_i A_j
inline Mat4 gamma5(const SpacetimeFields& f, const Vec4& x) { return em_field(f, x) - 2.0 * covariant_dA(f, x); }

// max |Gamma^5_ij - Gamma^5_ji - 2 [F_ij - (d_i A_j - d_j A_i)]|
inline double torsion_residual(const SpacetimeFields& f, const Vec4& x) {
  const Mat4 g5 = gamma5(f, x);
  const Mat4 da = f.dA(x);
  return (g5 - g5.transpose() - 2.0 * (em_field(f, x) - (da - da.transpose()))).cwiseAbs().maxCoeff();
}

struct ParticleState {
  Vec4 X = Vec4::Zero();
  Vec4 U = Vec4::Unit(0);
  double q = 0.0;
  double m0 = 1.0;
  double s = 0.0;
};

// U proportional to (1, v), normalised with the local metric.
inline ParticleState make_state(const SpacetimeFields& f, const Vec4& x, const Eigen::Vector3d& v, double q, double m0) {
  if (!(v.norm() < 1.0)) throw validation_error("superluminal velocity");
  if (!(m0 > 0)) throw validation_error("rest mass must be positive");
  Vec4 u;
  u << 1.0, v;
  const double n2 = u.dot(f.G(x) * u);
  if (!(n2 > 0)) throw validation_error("velocity is not timelike in the local metric");
  return {x, u / std::sqrt(n2), q, m0, 0.0};
}

inline double norm_defect(const SpacetimeFields& f, const ParticleState& st) {
  return std::abs(st.U.dot(f.G(st.X) * st.U) - 1.0);
}

// dX/ds = U, dU/ds = -Gamma(U) U - (q / m0) G^-1 F U.
inline std::pair<Vec4, Vec4> motion_rhs(const ParticleState& st, const SpacetimeFields& f) {
  const Rank3 gamma = christoffel(f, st.X);
  const Vec4 force = f.G_inv(st.X) * em_field(f, st.X) * st.U;
  return {st.U, -contract_first(gamma, st.U) * st.U - (st.q / st.m0) * force};
}

struct Trajectory {
  std::vector<ParticleState> states;
  double max_norm_drift = 0.0;
};

namespace detail {

template <class Rhs>
void rk4_step(Vec4& x, Vec4& y, double h, Rhs&& rhs) {
  const auto [k1x, k1y] = rhs(x, y);
  const auto [k2x, k2y] = rhs(x + 0.5 * h * k1x, y + 0.5 * h * k1y);
  const auto [k3x, k3y] = rhs(x + 0.5 * h * k2x, y + 0.5 * h * k2y);
  const auto [k4x, k4y] = rhs(x + h * k3x, y + h * k3y);
  x += h / 6 * (k1x + 2 * k2x + 2 * k3x + k4x);
  y += h / 6 * (k1y + 2 * k2y + 2 * k3y + k4y);
}

inline void check_step(const SpacetimeFields& f, const Vec4& x) {
  const Mat4 g = f.metric(x);
  if (!g.allFinite() || !(g.determinant() < -1e-10)) {  // signature (1, 3) has det < 0
    std::ostringstream msg;
    msg << "metric singular along path at X = (" << x.transpose() << ")";
    throw numerical_error(msg.str());
  }
}

}  // namespace detail

// Fixed-step RK4; q and m0 are carried unchanged. Records every `record_every` steps.
inline Trajectory integrate_motion(const ParticleState& st0, const SpacetimeFields& f, double ds, int n_steps,
                                   int record_every = 1) {
  if (!(ds > 0)) throw validation_error("ds must be positive");
  if (n_steps < 0 || record_every < 1) throw validation_error("bad step counts");
  Trajectory tr;
  ParticleState st = st0;
  tr.states.push_back(st);
  tr.max_norm_drift = norm_defect(f, st);
  auto rhs = [&](const Vec4& x, const Vec4& u) {
    ParticleState tmp = st;
    tmp.X = x;
    tmp.U = u;
    return motion_rhs(tmp, f);
  };
  for (int n = 1; n <= n_steps; ++n) {
    detail::rk4_step(st.X, st.U, ds, rhs);
    detail::check_step(f, st.X);
    st.s = st0.s + n * ds;
    tr.max_norm_drift = std::max(tr.max_norm_drift, norm_defect(f, st));
    if (n % record_every == 0 || n == n_steps) tr.states.push_back(st);
  }
  return tr;
}

struct TransportSample {
  double s;
  Vec4 X;
  Vec4 Pi;  // covector components of the 5-row, q is the fifth
  double q;
  Vec4 U;
};

// Pi* = m0 U* - 2 q A*
inline Vec4 five_momentum_row(const SpacetimeFields& f, const ParticleState& st) {
  return st.m0 * f.G(st.X) * st.U - 2.0 * st.q * f.A(st.X);
}

// U = G^-1 (Pi* + 2 q A*)^T / m0
inline Vec4 velocity_from_row(const SpacetimeFields& f, const Vec4& x, const Vec4& pi, double q, double m0) {
  return f.G_inv(x) * (pi + 2.0 * q * f.A(x)) / m0;
}

// d(Pi*, q)/ds = (Pi*, q) Gamma_hat(U): dPi_j/ds = Gamma^k_ij U^i Pi_k + q Gamma^5_ij U^i, dq/ds = 0.
inline std::vector<TransportSample> transport_5momentum(const ParticleState& st0, const SpacetimeFields& f, double ds,
                                                        int n_steps, int record_every = 1) {
  if (!(ds > 0)) throw validation_error("ds must be positive");
  const double q = st0.q, m0 = st0.m0;
  Vec4 x = st0.X;
  Vec4 pi = five_momentum_row(f, st0);
  auto rhs = [&](const Vec4& xx, const Vec4& p) {
    const Vec4 u = velocity_from_row(f, xx, p, q, m0);
    const Mat4 gu = contract_first(christoffel(f, xx), u);
    const Vec4 dp = gu.transpose() * p + q * gamma5(f, xx).transpose() * u;
    return std::pair<Vec4, Vec4>{u, dp};
  };
  std::vector<TransportSample> out;
  out.push_back({st0.s, x, pi, q, velocity_from_row(f, x, pi, q, m0)});
  for (int n = 1; n <= n_steps; ++n) {
    detail::rk4_step(x, pi, ds, rhs);
    detail::check_step(f, x);
    if (n % record_every == 0 || n == n_steps)
      out.push_back({st0.s + n * ds, x, pi, q, velocity_from_row(f, x, pi, q, m0)});
  }
  return out;
}

// Scalar gauge function with gradient and Hessian; third derivatives optional.
struct GaugeFunction {
  std::function<Vec4(const Vec4&)> grad;
  std::function<Mat4(const Vec4&)> hess;
  std::function<Rank3(const Vec4&)> third;  // [r](s, i) = d_r d_s d_i h
};

// A* -> A* + dh; the metric is untouched.
inline SpacetimeFields gauge_transform(const SpacetimeFields& f, const GaugeFunction& h) {
  if (!h.grad || !h.hess) throw validation_error("gauge function needs gradient and Hessian");
  SpacetimeFields out = f;
  out.name = f.name + "+gauge";
  out.potential = [f, h](const Vec4& x) { return Vec4(f.A(x) + h.grad(x)); };
  out.potential_d = [f, h](const Vec4& x) { return Mat4(f.dA(x) + h.hess(x)); };
  if (h.third && f.potential_dd) {
    out.potential_dd = [f, h](const Vec4& x) {
      Rank3 a = f.ddA(x);
      const Rank3 b = h.third(x);
      for (int r = 0; r < 4; ++r) a[r] += b[r];
      return a;
    };
  } else {
    out.potential_dd = nullptr;
  }
  return out;
}

// Algebraic (Kasa) circle fit in the (x, y) plane; returns (centre, radius).
inline std::pair<Eigen::Vector2d, double> fit_circle(const std::vector<Eigen::Vector2d>& pts) {
  if (pts.size() < 3) throw validation_error("circle fit needs three points");
  Eigen::MatrixXd a(pts.size(), 3);
  Eigen::VectorXd b(pts.size());
  for (size_t i = 0; i < pts.size(); ++i) {
    a.row(i) << pts[i](0), pts[i](1), 1.0;
    b(i) = -pts[i].squaredNorm();
  }
  const Eigen::Vector3d sol = a.colPivHouseholderQr().solve(b);
  const Eigen::Vector2d c(-sol(0) / 2, -sol(1) / 2);
  return {c, std::sqrt(c.squaredNorm() - sol(2))};
}

}  // namespace coorbit
