#pragma once

// Momenta of the four groups: pairing, coadjoint action, spin, polarization,
// invariants and isotropy counting.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "coorbit/errors.hpp"
#include "coorbit/groups.hpp"
#include "coorbit/hyperlin.hpp"

namespace coorbit {

// (Pi, M, q, Q). Poincare momenta keep q = 0, Q = 0.
struct Momentum {
  Flavor flavor;
  Vec4 Pi = Vec4::Zero();
  Mat4 M = Mat4::Zero();
  double q = 0.0;
  Vec4 Q = Vec4::Zero();

  static Momentum zero(const Flavor& f) { return Momentum{f}; }
};

inline int momentum_dim(const Flavor& f) { return f.algebra_dim(); }

// Pi(4), the entries (G M)_ij with i < j (6), then q and Q for five-dimensional flavors.
inline VectorXd to_components(const Momentum& mu) {
  VectorXd v(momentum_dim(mu.flavor));
  v.head<4>() = mu.Pi;
  const Mat4 a = minkowski().gram() * mu.M;
  int k = 4;
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j) v(k++) = a(i, j);
  if (mu.flavor.five_dim()) {
    v(10) = mu.q;
    v.tail<4>() = mu.Q;
  }
  return v;
}

inline Momentum from_components(const Flavor& f, const VectorXd& v) {
  if (v.size() != momentum_dim(f)) throw validation_error("wrong number of momentum components");
  Momentum mu{f};
  mu.Pi = v.head<4>();
  Mat4 a = Mat4::Zero();
  int k = 4;
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j) {
      a(i, j) = v(k);
      a(j, i) = -v(k);
      ++k;
    }
  mu.M = minkowski().inverse() * a;
  if (f.five_dim()) {
    mu.q = v(10);
    mu.Q = v.tail<4>();
  }
  return mu;
}

inline double momentum_diff(const Momentum& a, const Momentum& b) {
  return (to_components(a) - to_components(b)).cwiseAbs().maxCoeff();
}

inline double skew_defect(const Momentum& mu) { return skew_adjoint_defect(mu.M, minkowski()); }

// Pi_hat = (Pi, q), M_hat = [[M, Q], [w^-2 Q*, 0]] for G1 / GOmega.
inline std::pair<Vec5, Mat5> hat_components(const Momentum& mu) {
  if (!mu.flavor.pseudo_orthogonal()) throw validation_error("five-dimensional momentum needs G1 or GOmega");
  Vec5 pi;
  pi << mu.Pi, mu.q;
  Mat5 m = Mat5::Zero();
  m.topLeftCorner<4, 4>() = mu.M;
  m.topRightCorner<4, 1>() = mu.Q;
  m.bottomLeftCorner<1, 4>() = minkowski().lower(mu.Q).transpose() / mu.flavor.w2();
  return {pi, m};
}

inline Momentum from_hat(const Flavor& f, const Vec5& pi, const Mat5& m) {
  if (!f.pseudo_orthogonal()) throw validation_error("five-dimensional momentum needs G1 or GOmega");
  Momentum mu{f};
  mu.Pi = pi.head<4>();
  mu.q = pi(4);
  mu.M = m.topLeftCorner<4, 4>();
  mu.Q = m.topRightCorner<4, 1>();
  return mu;
}

// -Pi* dC - Tr(M dP)/2 - Q* db plus the fifth-translation term.
// G0 uses -q dxi. For G1/GOmega the term is +w^2 q dxi, i.e. -Pi_hat* dC_hat
// with the w-metric, so that Pi_hat = (Pi, q) transforms as P_hat Pi_hat'.
inline double pair(const Momentum& mu, const AlgebraElement& z) {
  require_same(mu.flavor, z.flavor);
  const auto g = minkowski();
  const Vec4 dc = z.dC.head<4>();
  const Mat4 dp = z.dP.topLeftCorner<4, 4>();
  double v = -g.dot(mu.Pi, dc) - 0.5 * (mu.M * dp).trace();
  if (!mu.flavor.five_dim()) return v;
  const double qterm = mu.flavor.kind == FlavorKind::G0 ? -mu.q * z.dxi() : mu.flavor.w2() * mu.q * z.dxi();
  return v + qterm - g.dot(mu.Q, z.db());
}

namespace detail {

// B(k, c) = pair(e_c, Z_k); invertible when the basis is a basis.
inline Eigen::PartialPivLU<MatrixXd> pairing_system(const Flavor& f, const std::vector<AlgebraElement>& basis) {
  const int n = momentum_dim(f);
  MatrixXd b(n, n);
  for (int c = 0; c < n; ++c) {
    const Momentum e = from_components(f, VectorXd::Unit(n, c));
    for (int k = 0; k < n; ++k) b(k, c) = pair(e, basis[k]);
  }
  if (svd_rank(b) < n) throw numerical_error("singular pairing system");
  return b.partialPivLu();
}

struct PairingCache {
  Flavor flavor;
  std::vector<AlgebraElement> basis;
  Eigen::PartialPivLU<MatrixXd> lu;
  explicit PairingCache(const Flavor& f) : flavor(f), basis(algebra_basis(f)), lu(pairing_system(f, basis)) {}
};

}  // namespace detail

// (Ad*(a) mu)(Z) = mu(a^-1 Z a), evaluated on the basis and solved for components.
// Works for any invertible affine matrix, so near-group elements are fine.
inline Momentum coadjoint_oracle(const GroupElement& a, const Momentum& mu) {
  require_same(a.flavor(), mu.flavor);
  const detail::PairingCache cache(mu.flavor);
  const MatrixXd m = a.affine();
  const MatrixXd minv = m.inverse();
  const int n = momentum_dim(mu.flavor);
  VectorXd rhs(n);
  for (int k = 0; k < n; ++k)
    rhs(k) = pair(mu, algebra_from_affine(mu.flavor, minv * cache.basis[k].affine() * m));
  return from_components(mu.flavor, cache.lu.solve(rhs));
}

// Component formulas. For GOmega, q uses the untransformed Pi'.
inline Momentum coadjoint_closed(const GroupElement& a, const Momentum& mu) {
  require_same(a.flavor(), mu.flavor);
  const auto g = minkowski();
  const Flavor& f = mu.flavor;
  const Mat4 p = a.lorentz_block();
  const Vec4 c = a.translation4();
  const Mat4 p_adj = adjoint(p, g);
  auto wedge_map = [&](const Vec4& u, const Vec4& v) -> Mat4 { return bivector_map(u, v, g); };

  Momentum out{f};
  if (f.kind == FlavorKind::Poincare) {
    out.Pi = p * mu.Pi;
    out.M = p * mu.M * p_adj + wedge_map(c, out.Pi);
    return out;
  }
  const Vec4 b = a.boost();
  if (f.kind == FlavorKind::G0) {
    out.Pi = p * (mu.Pi - mu.q * b);
    out.M = p * mu.M * p_adj + wedge_map(c, out.Pi) + wedge_map(p * b, p * mu.Q);
    out.q = mu.q;
    out.Q = p * mu.Q + mu.q * c;
    return out;
  }
  const double w2 = f.w2();
  const double beta = a.beta();
  const double xi = a.xi();
  const Vec4 pb = adjoint(p, g).inverse() * b;  // P*^-1 b
  const Vec4 pq = p * mu.Q;
  const double bpi = g.dot(b, mu.Pi);
  out.Pi = p * mu.Pi + w2 * mu.q * beta * pb;
  out.M = p * mu.M * p_adj + beta * wedge_map(pb, pq) + wedge_map(c, out.Pi);
  out.q = bpi + beta * mu.q;
  out.Q = beta * pq - w2 * (p * mu.M * b + beta * g.dot(b, mu.Q) * pb) + w2 * (xi * out.Pi - out.q * c);
  return out;
}

// M0 = M + Pi X* - X Pi*
inline Mat4 spin_momentum(const Momentum& mu, const Vec4& x) {
  return mu.M + bivector_map(mu.Pi, x, minkowski());
}

// G0 charge form M0 = M + (Pi Q* - Q Pi*) / q.
inline Mat4 spin_momentum_charge(const Momentum& mu) {
  if (mu.flavor.kind != FlavorKind::G0) throw validation_error("charge form of the spin needs G0");
  if (mu.q == 0.0) throw validation_error("spin form undefined, use X-form");
  return mu.M + bivector_map(mu.Pi, mu.Q, minkowski()) / mu.q;
}

// M_hat0 = M_hat + Pi_hat X_hat* - X_hat Pi_hat* with the w-metric.
inline Mat5 spin_momentum_hat(const Momentum& mu, const Vec5& x) {
  const auto [pi, m] = hat_components(mu);
  return m + bivector_map(pi, x, flavor_metric5(mu.flavor));
}

inline double mass_square(const Momentum& mu) {
  if (mu.flavor.pseudo_orthogonal()) {
    const auto [pi, m] = hat_components(mu);
    return flavor_metric5(mu.flavor).dot(pi, pi);
  }
  return minkowski().dot(mu.Pi, mu.Pi);
}

inline bool is_timelike(const Momentum& mu, double margin = 0.0) {
  const double m2 = mass_square(mu);
  const double scale = std::max(1.0, mu.Pi.squaredNorm() + mu.flavor.w2() * mu.q * mu.q);
  return m2 > margin * scale;
}

inline void require_timelike(const Momentum& mu) {
  if (!is_timelike(mu, 1e-12)) throw validation_error("classification requires timelike Π");
}

struct Line {
  Vec4 point;
  Vec4 direction;
};

// Point X with X* Pi = 0 and M0(X) Pi = 0, i.e. X = M Pi / (Pi* Pi).
inline Line trajectory_line(const Momentum& mu) {
  const auto g = minkowski();
  const double m2 = g.dot(mu.Pi, mu.Pi);
  if (!(m2 > 1e-12 * std::max(1.0, mu.Pi.squaredNorm()))) throw validation_error("classification requires timelike Π");
  return {mu.M * mu.Pi / m2, mu.Pi / std::sqrt(m2)};
}

// W = (*M) Pi; unchanged when M is replaced by any M0.
inline Vec4 polarization(const Momentum& mu) {
  if (mu.flavor.pseudo_orthogonal()) throw validation_error("polarization vector needs Poincare or G0; use polarization_map");
  require_timelike(mu);
  return hodge_map(mu.M, minkowski()) * mu.Pi;
}

// Matrix of V -> (*A_M_hat(Pi_hat, V, .))^ raised.
inline Mat5 polarization_map(const Momentum& mu) {
  if (mu.flavor.kind == FlavorKind::G0) throw validation_error("Hodge undefined for degenerate metric");
  const Metric<5> g = flavor_metric5(mu.flavor);
  const auto [pi, m] = hat_components(mu);
  const KForm<5> t = hodge(form_of_map(m, g), g).contract(pi);
  return g.inverse() * t.to_matrix().transpose();
}

inline Vec5 polarization_map(const Momentum& mu, const Vec5& v) { return polarization_map(mu) * v; }

// sqrt(-Tr(pol^2) / 2): pol acts as s m0 times a quarter turn on the plane.
inline double polarization_strength(const Mat5& pol) { return std::sqrt(std::max(0.0, -0.5 * (pol * pol).trace())); }

// Orthonormal basis of the image of the polarization map (Gram-Schmidt with the w-metric).
inline std::pair<Vec5, Vec5> polarization_plane(const Momentum& mu, double tol = 1e-9) {
  require_timelike(mu);
  const Mat5 pol = polarization_map(mu);
  const double scale = std::max(1.0, pol.cwiseAbs().maxCoeff());
  if (polarization_strength(pol) <= tol * scale) throw validation_error("no polarization plane");
  const Metric<5> g = flavor_metric5(mu.flavor);
  // Image vectors are spacelike (pol = s m0 rotation on a negative-definite plane).
  std::vector<Vec5> basis;
  std::vector<int> order(5);
  for (int k = 0; k < 5; ++k) order[k] = k;
  std::sort(order.begin(), order.end(), [&](int a, int b) { return pol.col(a).norm() > pol.col(b).norm(); });
  for (int k : order) {
    Vec5 v = pol.col(k);
    for (const auto& e : basis) v += g.dot(v, e) * e;  // e* e = -1
    const double n2 = -g.dot(v, v);
    if (n2 > tol * tol * scale * scale) basis.push_back(v / std::sqrt(n2));
    if (basis.size() == 2) break;
  }
  if (basis.size() < 2) throw numerical_error("polarization image has rank below 2");
  return {basis[0], basis[1]};
}

// -(J1 J1* + J2 J2*): projector onto the plane for a basis with J* J = -1.
inline Mat5 plane_projector(const Vec5& j1, const Vec5& j2, const Metric<5>& g) {
  return -(j1 * g.lower(j1).transpose() + j2 * g.lower(j2).transpose());
}

struct Invariants {
  double m0 = 0.0;
  double s = 0.0;
  std::optional<double> q;
};

// Poincare: (m0, s). G1/GOmega: (m0 with the w-metric, s from the polarization map).
// G0: (q, m0, s) with m0 = sqrt(Pi* Pi); for q != 0 the last two depend on
// the frame, since Pi shifts by -q b under the action.
inline Invariants invariants(const Momentum& mu) {
  require_timelike(mu);
  Invariants inv;
  inv.m0 = std::sqrt(mass_square(mu));
  if (mu.flavor.pseudo_orthogonal()) {
    inv.s = polarization_strength(polarization_map(mu)) / inv.m0;
    return inv;
  }
  const Vec4 w = polarization(mu);
  inv.s = std::sqrt(std::max(0.0, -minkowski().dot(w, w))) / inv.m0;
  if (mu.flavor.kind == FlavorKind::G0) inv.q = mu.q;
  return inv;
}

// Pi* Pi and W* W.
inline std::pair<double, double> poincare_casimirs(const Momentum& mu) {
  const auto g = minkowski();
  const Vec4 w = hodge_map(mu.M, g) * mu.Pi;
  return {g.dot(mu.Pi, mu.Pi), g.dot(w, w)};
}

// Lorentz scalars of a skew map: -Tr(M^2)/2 and Tr(M (*M))/4.
inline std::pair<double, double> spin_casimirs(const Mat4& m0) {
  const auto g = minkowski();
  return {-0.5 * (m0 * m0).trace(), 0.25 * (m0 * hodge_map(m0, g)).trace()};
}

struct IsotropyOptions {
  double step = 1e-5;
  double rel_tol = 1e-8;
  double gap = 10.0;
};

// dim g - rank of Z -> d/dt Ad*(exp tZ) mu at t = 0, central differences.
inline int isotropy_dimension(const Momentum& mu, const IsotropyOptions& opt = {}) {
  const Flavor& f = mu.flavor;
  const auto basis = algebra_basis(f);
  const int n = momentum_dim(f);
  MatrixXd d(n, basis.size());
  for (size_t k = 0; k < basis.size(); ++k) {
    const VectorXd plus = to_components(coadjoint_oracle(exp_approx(basis[k], opt.step), mu));
    const VectorXd minus = to_components(coadjoint_oracle(exp_approx(basis[k], -opt.step), mu));
    d.col(k) = (plus - minus) / (2 * opt.step);
  }
  const Eigen::JacobiSVD<MatrixXd> svd(d);
  const VectorXd sv = svd.singularValues();
  if (sv.size() == 0 || sv(0) == 0.0) return f.algebra_dim();
  const double cut = opt.rel_tol * sv(0);
  int rank = 0;
  for (int i = 0; i < sv.size(); ++i) {
    if (sv(i) > cut / opt.gap && sv(i) < cut * opt.gap) throw numerical_error("inconclusive rank");
    if (sv(i) > cut) ++rank;
  }
  return f.algebra_dim() - rank;
}

enum class ParticleTag { ChargedWithSpin, ChargedSpinless, UnchargedWithSpin, UnchargedSpinless, NonTimelike };

inline std::string tag_name(ParticleTag t) {
  switch (t) {
    case ParticleTag::ChargedWithSpin: return "charged-with-spin";
    case ParticleTag::ChargedSpinless: return "charged-spinless";
    case ParticleTag::UnchargedWithSpin: return "uncharged-with-spin";
    case ParticleTag::UnchargedSpinless: return "uncharged-spinless";
    case ParticleTag::NonTimelike: return "non-timelike";
  }
  return "?";
}

inline ParticleTag tag_from_name(const std::string& s) {
  for (auto t : {ParticleTag::ChargedWithSpin, ParticleTag::ChargedSpinless, ParticleTag::UnchargedWithSpin,
                 ParticleTag::UnchargedSpinless, ParticleTag::NonTimelike})
    if (tag_name(t) == s) return t;
  throw validation_error("unknown particle class: " + s);
}

struct ParticleClass {
  ParticleTag tag = ParticleTag::NonTimelike;
  std::optional<Invariants> invariants;
};

// Spin is decided on M0 for charged G0 momenta, otherwise on s.
inline ParticleClass classify(const Momentum& mu, double tol = 1e-9) {
  ParticleClass out;
  if (!is_timelike(mu, 1e-12)) return out;
  const Invariants inv = invariants(mu);
  out.invariants = inv;
  const bool charged = mu.flavor.five_dim() && std::abs(mu.q) > tol;
  bool spin = inv.s > tol;
  if (charged && mu.flavor.kind == FlavorKind::G0)
    spin = spin_momentum_charge(mu).cwiseAbs().maxCoeff() > tol * std::max(1.0, mu.M.cwiseAbs().maxCoeff());
  if (charged)
    out.tag = spin ? ParticleTag::ChargedWithSpin : ParticleTag::ChargedSpinless;
  else
    out.tag = spin ? ParticleTag::UnchargedWithSpin : ParticleTag::UnchargedSpinless;
  return out;
}

inline bool q_position_consistency(const Momentum& mu, const Vec4& x, double tol = 1e-9) {
  if (mu.q == 0.0) throw validation_error("Q = qX check needs q != 0");
  return (mu.Q - mu.q * x).norm() < tol;
}

// Forward constructions with known invariants.

// Pi = m0 I, M0 = s J(I, J), M = M0 - Pi X* + X Pi*.
inline Momentum make_momentum_4d(const Flavor& f, double m0, double s, const Vec4& x, const Vec4& i, const Vec4& j,
                                 double q = 0.0) {
  if (f.pseudo_orthogonal()) throw validation_error("use make_momentum_5d for G1/GOmega");
  const auto g = minkowski();
  Momentum mu{f};
  mu.Pi = m0 * i;
  mu.M = s * vector_product_map<4>({i, j}, g) - bivector_map(mu.Pi, x, g);
  if (f.kind == FlavorKind::G0) {
    mu.q = q;
    mu.Q = q * x;
  } else if (q != 0.0) {
    throw validation_error("Poincare momenta carry no charge");
  }
  return mu;
}

// Pi_hat = m0 I_hat, M_hat0 = s J_hat(I_hat, J1, J2), M_hat = M_hat0 - Pi_hat X_hat* + X_hat Pi_hat*.
inline Momentum make_momentum_5d(const Flavor& f, double m0, double s, const Vec5& x, const Vec5& i, const Vec5& j1,
                                 const Vec5& j2) {
  const Metric<5> g = flavor_metric5(f);
  const Vec5 pi = m0 * i;
  const Mat5 m = s * vector_product_map<5>({i, j1, j2}, g) - bivector_map(pi, x, g);
  return from_hat(f, pi, m);
}

struct SweepRow {
  double omega = 0.0;
  double q_in = 0.0;
  double q_out = 0.0;
  double dq = 0.0;
  double m0_in = NAN;
  double m0_out = NAN;
  double m0_drift = NAN;
  int isotropy = -1;  // -1 when the rank test is inconclusive
};

// One row per omega (GOmega), then an omega = 0 row for G0.
inline std::vector<SweepRow> omega_sweep(const ElementParams& prm, const Momentum& tmpl, std::span<const double> omegas) {
  std::vector<SweepRow> rows;
  auto run = [&](const Flavor& f, double w) {
    Momentum mu = tmpl;
    mu.flavor = f;
    const GroupElement a = make_element(f, prm);
    const Momentum out = coadjoint_closed(a, mu);
    SweepRow r;
    r.omega = w;
    r.q_in = mu.q;
    r.q_out = out.q;
    r.dq = out.q - mu.q;
    if (mass_square(mu) > 0) {
      r.m0_in = std::sqrt(mass_square(mu));
      r.m0_out = std::sqrt(std::max(0.0, mass_square(out)));
      r.m0_drift = std::abs(r.m0_out - r.m0_in) / r.m0_in;
    }
    try {
      r.isotropy = isotropy_dimension(mu);
    } catch (const numerical_error&) {
      r.isotropy = -1;
    }
    rows.push_back(r);
  };
  for (double w : omegas) {
    if (!(w > 0 && w <= 1)) throw validation_error("sweep omegas must lie in (0, 1]");
    run(Flavor::gomega(w), w);
  }
  run(Flavor::g0(), 0.0);
  return rows;
}

}  // namespace coorbit
