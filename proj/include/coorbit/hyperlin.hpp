#pragma once

// Linear algebra over pseudo-Euclidean spaces of dimension 3..5:
// adjoints, volume forms, vector products and the Hodge operator.

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <span>
#include <vector>

#include "coorbit/errors.hpp"

namespace coorbit {

template <int N>
using Vec = Eigen::Matrix<double, N, 1>;
template <int N>
using Mat = Eigen::Matrix<double, N, N>;

// Number of singular values above rel_tol * sigma_max.
inline int svd_rank(const Eigen::MatrixXd& m, double rel_tol = 1e-10) {
  if (m.size() == 0) return 0;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  const auto& s = svd.singularValues();
  if (s.size() == 0 || s(0) == 0.0) return 0;
  int r = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s(i) > rel_tol * s(0)) ++r;
  return r;
}

// Sign of the permutation sending idx to (0..n-1); 0 on repeated entries.
inline int permutation_sign(std::span<const int> idx) {
  const std::size_t n = idx.size();
  int sign = 1;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      if (idx[i] == idx[j]) return 0;
      if (idx[i] > idx[j]) sign = -sign;
    }
  return sign;
}

template <int N>
class Metric {
 public:
  static_assert(N >= 1 && N <= 6);

  explicit Metric(const Mat<N>& gram, int orientation = +1) : gram_(gram), orientation_(orientation) {
    if (orientation != 1 && orientation != -1) throw validation_error("orientation must be +1 or -1");
    if ((gram - gram.transpose()).cwiseAbs().maxCoeff() > 1e-14 * std::max(1.0, gram.cwiseAbs().maxCoeff()))
      throw validation_error("gram matrix is not symmetric");
    det_ = gram.determinant();
    if (std::abs(det_) <= 1e-12) throw validation_error("gram matrix is degenerate");
    inverse_ = gram.inverse();
    Eigen::SelfAdjointEigenSolver<Mat<N>> eig(gram, Eigen::EigenvaluesOnly);
    positive_ = static_cast<int>((eig.eigenvalues().array() > 0).count());
  }

  Metric(const Mat<N>& gram, int orientation, int declared_positive) : Metric(gram, orientation) {
    if (declared_positive != positive_) throw validation_error("signature does not match declaration");
  }

  static constexpr int dim() { return N; }
  const Mat<N>& gram() const { return gram_; }
  const Mat<N>& inverse() const { return inverse_; }
  int orientation() const { return orientation_; }
  // p in the signature (p, n - p)
  int positive() const { return positive_; }
  int negative() const { return N - positive_; }
  double det() const { return det_; }

  Vec<N> lower(const Vec<N>& v) const { return gram_ * v; }
  Vec<N> raise(const Vec<N>& w) const { return inverse_ * w; }
  double dot(const Vec<N>& u, const Vec<N>& v) const { return u.dot(gram_ * v); }

 private:
  Mat<N> gram_;
  Mat<N> inverse_;
  int orientation_;
  int positive_ = 0;
  double det_ = 0.0;
};

inline Metric<4> minkowski(int orientation = +1) {
  return Metric<4>(Vec<4>(1, -1, -1, -1).asDiagonal().toDenseMatrix(), orientation, 1);
}

// diag(1, -1, -1, -1, -w^2)
inline Metric<5> omega_metric(double omega, int orientation = +1) {
  if (!(omega > 0)) throw validation_error("Hodge undefined for degenerate metric");
  Vec<5> d;
  d << 1, -1, -1, -1, -omega * omega;
  return Metric<5>(d.asDiagonal().toDenseMatrix(), orientation, 1);
}

template <int N>
Metric<N> euclidean(int orientation = +1) {
  return Metric<N>(Mat<N>::Identity(), orientation, N);
}

// Degenerate diag(G, 0) on R^5 with kernel direction e5. No inverse, no Hodge.
struct SemiMetric {
  Mat<5> gram;
  Vec<5> kernel;
};

inline SemiMetric g0_semimetric() {
  SemiMetric s;
  s.gram.setZero();
  s.gram.topLeftCorner<4, 4>() = minkowski().gram();
  s.kernel = Vec<5>::Unit(4);
  return s;
}

// A* = G0^-1 A^T G for A : (R^n, G0) -> (R^m, G).
template <int M, int N>
Eigen::Matrix<double, N, M> adjoint(const Eigen::Matrix<double, M, N>& a, const Metric<N>& g0, const Metric<M>& g) {
  return g0.inverse() * a.transpose() * g.gram();
}

template <int N>
Mat<N> adjoint(const Mat<N>& a, const Metric<N>& g) {
  return adjoint<N, N>(a, g, g);
}

template <int M, int N>
Eigen::Matrix<double, N, M> adjoint(const Eigen::Matrix<double, M, N>&, const SemiMetric&, const SemiMetric&) {
  throw validation_error("adjoint undefined for semi-metric");
}

// Covariant q-form stored densely: N^q entries, row-major in the indices.
template <int N>
class KForm {
 public:
  explicit KForm(int degree = 0) : degree_(degree), comps_(ipow(N, degree), 0.0) {
    if (degree < 0 || degree > N) throw validation_error("form degree out of range");
  }

  // Rejects arrays that are not antisymmetric to tol (relative to the largest entry).
  static KForm from_dense(int degree, std::vector<double> comps, double tol = 1e-14) {
    KForm f(degree);
    if (comps.size() != f.comps_.size()) throw validation_error("form component count mismatch");
    f.comps_ = std::move(comps);
    if (f.antisymmetry_defect() > tol * std::max(1.0, f.max_abs())) throw validation_error("form is not antisymmetric");
    return f;
  }

  // Alternating projection (1/q!) sum sign(s) T_{s(i)}.
  static KForm antisymmetrize(int degree, const std::vector<double>& comps) {
    KForm f(degree);
    if (comps.size() != f.comps_.size()) throw validation_error("form component count mismatch");
    std::vector<int> perm(degree), permuted(degree);
    double fact = 1;
    for (int k = 2; k <= degree; ++k) fact *= k;
    visit(degree, [&](std::span<const int> idx, int n) {
      for (int k = 0; k < degree; ++k) perm[k] = k;
      double acc = 0;
      do {
        for (int k = 0; k < degree; ++k) permuted[k] = idx[perm[k]];
        acc += permutation_sign(perm) * comps[flat(permuted)];
      } while (std::next_permutation(perm.begin(), perm.end()));
      f.comps_[n] = acc / fact;
    });
    return f;
  }

  static KForm from_matrix(const Mat<N>& a) {
    std::vector<double> c(N * N);
    for (int i = 0; i < N; ++i)
      for (int j = 0; j < N; ++j) c[i * N + j] = a(i, j);
    return from_dense(2, std::move(c), 1e-12);
  }

  Mat<N> to_matrix() const {
    if (degree_ != 2) throw validation_error("to_matrix needs a 2-form");
    Mat<N> a;
    for (int i = 0; i < N; ++i)
      for (int j = 0; j < N; ++j) a(i, j) = comps_[i * N + j];
    return a;
  }

  Vec<N> to_vector() const {
    if (degree_ != 1) throw validation_error("to_vector needs a 1-form");
    return Eigen::Map<const Vec<N>>(comps_.data());
  }

  int degree() const { return degree_; }
  const std::vector<double>& comps() const { return comps_; }
  double operator()(std::span<const int> idx) const { return comps_[flat(idx)]; }
  double operator()(std::initializer_list<int> idx) const {
    return comps_[flat(std::span<const int>(idx.begin(), idx.size()))];
  }

  double max_abs() const {
    double m = 0;
    for (double c : comps_) m = std::max(m, std::abs(c));
    return m;
  }

  double max_abs_diff(const KForm& o) const {
    if (o.degree_ != degree_) throw validation_error("degree mismatch");
    double m = 0;
    for (std::size_t i = 0; i < comps_.size(); ++i) m = std::max(m, std::abs(comps_[i] - o.comps_[i]));
    return m;
  }

  KForm operator*(double s) const {
    KForm r = *this;
    for (double& c : r.comps_) c *= s;
    return r;
  }
  KForm operator+(const KForm& o) const {
    if (o.degree_ != degree_) throw validation_error("degree mismatch");
    KForm r = *this;
    for (std::size_t i = 0; i < comps_.size(); ++i) r.comps_[i] += o.comps_[i];
    return r;
  }
  KForm operator-(const KForm& o) const { return *this + o * -1.0; }

  // (i_v A)(U...) = A(v, U...)
  KForm contract(const Vec<N>& v) const {
    if (degree_ == 0) throw validation_error("cannot contract a 0-form");
    KForm r(degree_ - 1);
    const int stride = ipow(N, degree_ - 1);
    for (int k = 0; k < N; ++k)
      for (int i = 0; i < stride; ++i) r.comps_[i] += v(k) * comps_[k * stride + i];
    return r;
  }

  double antisymmetry_defect() const {
    double worst = 0;
    std::vector<int> sw(degree_);
    visit(degree_, [&](std::span<const int> idx, int n) {
      for (int a = 0; a < degree_; ++a)
        for (int b = a + 1; b < degree_; ++b) {
          std::copy(idx.begin(), idx.end(), sw.begin());
          std::swap(sw[a], sw[b]);
          worst = std::max(worst, std::abs(comps_[n] + comps_[flat(sw)]));
        }
    });
    return worst;
  }

  // f(indices, component&) for every multi-index.
  template <class F>
  void for_each_index(F&& f) {
    visit(degree_, [&](std::span<const int> idx, int n) { f(idx, comps_[n]); });
  }

  // f(indices, flat position) for every multi-index of the given degree, in storage order.
  template <class F>
  static void visit(int degree, F&& f) {
    std::vector<int> idx(degree, 0);
    const int count = ipow(N, degree);
    for (int n = 0; n < count; ++n) {
      f(std::span<const int>(idx), n);
      for (int k = degree - 1; k >= 0; --k) {
        if (++idx[k] < N) break;
        idx[k] = 0;
      }
    }
  }

  static int flat(std::span<const int> idx) {
    int f = 0;
    for (int i : idx) f = f * N + i;
    return f;
  }

  static constexpr int ipow(int b, int e) {
    int r = 1;
    while (e-- > 0) r *= b;
    return r;
  }

 private:
  int degree_;
  std::vector<double> comps_;
};

// Levi-Civita tensor scaled by orientation * sqrt|det G|.
template <int N>
KForm<N> volume_form(const Metric<N>& g) {
  KForm<N> vol(N);
  const double scale = g.orientation() * std::sqrt(std::abs(g.det()));
  vol.for_each_index([&](std::span<const int> idx, double& c) { c = scale * permutation_sign(idx); });
  return vol;
}

// V1* ^ ... ^ Vq* with the convention (a ^ b)_{ij} = a_i b_j - a_j b_i.
template <int N>
KForm<N> wedge(const std::vector<Vec<N>>& covectors) {
  const int q = static_cast<int>(covectors.size());
  KForm<N> w(q);
  std::vector<int> perm(q);
  w.for_each_index([&](std::span<const int> idx, double& c) {
    for (int k = 0; k < q; ++k) perm[k] = k;
    double acc = 0;
    do {
      double term = permutation_sign(perm);
      for (int k = 0; k < q; ++k) term *= covectors[perm[k]](idx[k]);
      acc += term;
    } while (std::next_permutation(perm.begin(), perm.end()));
    c = acc;
  });
  return w;
}

// vol(V1, ..., Vk, .) as an (n - k)-form: the vectors fill the leading slots.
template <int N>
KForm<N> partial_volume(const std::vector<Vec<N>>& vs, const Metric<N>& g) {
  KForm<N> v = volume_form(g);
  for (const auto& x : vs) v = v.contract(x);
  return v;
}

// J with J* U = vol(V1, ..., V_{n-1}, U).
template <int N>
Vec<N> vector_product(const std::vector<Vec<N>>& vs, const Metric<N>& g) {
  if (static_cast<int>(vs.size()) != N - 1) throw validation_error("vector_product needs dim - 1 vectors");
  return g.raise(partial_volume(vs, g).to_vector());
}

// V -> J(V1, ..., V_{n-2}, V), skew-adjoint with respect to G.
template <int N>
Mat<N> vector_product_map(const std::vector<Vec<N>>& vs, const Metric<N>& g) {
  if (static_cast<int>(vs.size()) != N - 2) throw validation_error("vector_product_map needs dim - 2 vectors");
  return g.inverse() * partial_volume(vs, g).to_matrix().transpose();
}

// Vector product in dim N+1 for the metric diag(G, last) built from the
// N-dimensional one: each argument splits as (V_k, v_k), the orientation is
// inherited. The sqrt|last| factor is 1 for the unit fifth direction.
template <int N>
Vec<N + 1> vector_product_recursive(const std::vector<Vec<N + 1>>& vs, const Metric<N>& g, double last) {
  if (static_cast<int>(vs.size()) != N) throw validation_error("vector_product_recursive needs dim - 1 vectors");
  if (last == 0.0) throw validation_error("degenerate last diagonal entry");
  std::vector<Vec<N>> upper(N);
  for (int k = 0; k < N; ++k) upper[k] = vs[k].template head<N>();

  Vec<N + 1> row = Vec<N + 1>::Zero();
  for (int k = 0; k < N; ++k) {
    const double v = vs[k](N);
    if (v == 0.0) continue;
    std::vector<Vec<N>> rest;
    for (int j = 0; j < N; ++j)
      if (j != k) rest.push_back(upper[j]);
    // k is 0-based here, so (-1)^(N - (k+1) + 1) = (-1)^(N - k)
    const double sign = ((N - k) % 2 == 0) ? 1.0 : -1.0;
    row.template head<N>() += sign * v * g.lower(vector_product(rest, g));
  }
  Mat<N> cols;
  for (int k = 0; k < N; ++k) cols.col(k) = upper[k];
  row(N) = g.orientation() * std::sqrt(std::abs(g.det())) * cols.determinant();
  row *= std::sqrt(std::abs(last));

  Vec<N + 1> out;
  out.template head<N>() = g.raise(row.template head<N>());
  out(N) = row(N) / last;
  return out;
}

// Sign relating the Hodge operator to the raw contraction with vol.
// Intermediate degrees pick up sign(det G) so that, in Lorentzian 4D,
// *(V1 V2* - V2 V1*) = J(V1, V2) and W = (*M) Pi has the orientation of J.
// The double-Hodge law is unaffected; *1 and *vol keep the raw sign.
inline int hodge_sign(int n, int q, int positive) {
  int s = ((q * (n - q)) % 2 == 0) ? 1 : -1;
  if (q > 0 && q < n && ((n - positive) % 2 == 1)) s = -s;
  return s;
}

// Expected sign of ** on q-forms.
inline int double_hodge_sign(int n, int q, int positive) {
  return ((q * (n - 1) + n - positive) % 2 == 0) ? 1 : -1;
}

// (*A)(V1..V_{n-q}) = s G_q(A, vol(V1..V_{n-q}, .)), G_q(A,B) = (1/q!) A^{i..} B_{i..}.
template <int N>
KForm<N> hodge(const KForm<N>& a, const Metric<N>& g) {
  const int q = a.degree();
  // Raise every index of A.
  std::vector<double> up = a.comps();
  const int total = static_cast<int>(up.size());
  for (int slot = 0; slot < q; ++slot) {
    const int stride = KForm<N>::ipow(N, q - 1 - slot);
    std::vector<double> next(total, 0.0);
    for (int f = 0; f < total; ++f) {
      const int idx = (f / stride) % N;
      const int base = f - idx * stride;
      for (int m = 0; m < N; ++m) next[f] += g.inverse()(idx, m) * up[base + m * stride];
    }
    up = std::move(next);
  }
  double fact = 1;
  for (int k = 2; k <= q; ++k) fact *= k;
  const double scale =
      hodge_sign(N, q, g.positive()) * g.orientation() * std::sqrt(std::abs(g.det())) / fact;

  KForm<N> out(N - q);
  std::array<int, N> joined{};
  out.for_each_index([&](std::span<const int> j, double& c) {
    double acc = 0;
    std::copy(j.begin(), j.end(), joined.begin());
    KForm<N>::visit(q, [&](std::span<const int> i, int f) {
      std::copy(i.begin(), i.end(), joined.begin() + (N - q));
      const int s = permutation_sign(joined);
      if (s != 0) acc += s * up[f];
    });
    c = scale * acc;
  });
  return out;
}

template <int N>
KForm<N> hodge(const KForm<N>&, const SemiMetric&) {
  throw validation_error("Hodge undefined for degenerate metric");
}

// A skew-adjoint M is identified with the 2-form A_M = G M; *M is the
// skew-adjoint map identified with *A_M.
template <int N>
KForm<N> form_of_map(const Mat<N>& m, const Metric<N>& g) {
  return KForm<N>::from_matrix(g.gram() * m);
}

template <int N>
Mat<N> map_of_form(const KForm<N>& a, const Metric<N>& g) {
  return g.inverse() * a.to_matrix();
}

template <int N>
Mat<N> hodge_map(const Mat<N>& m, const Metric<N>& g) {
  static_assert(N == 4, "a skew map has a skew Hodge dual only in dimension 4");
  return map_of_form(hodge(form_of_map(m, g), g), g);
}

// U V* - V U*
template <int N>
Mat<N> bivector_map(const Vec<N>& u, const Vec<N>& v, const Metric<N>& g) {
  return u * g.lower(v).transpose() - v * g.lower(u).transpose();
}

template <int N>
double skew_adjoint_defect(const Mat<N>& m, const Metric<N>& g) {
  return (g.gram() * m + m.transpose() * g.gram()).cwiseAbs().maxCoeff();
}

}  // namespace coorbit
