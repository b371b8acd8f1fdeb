#pragma once

// Poincare, G1, G_omega and G0 as affine matrix groups on R^4 / R^5.

#include <Eigen/Dense>

#include <cmath>
#include <string>
#include <vector>

#include "coorbit/errors.hpp"
#include "coorbit/hyperlin.hpp"

namespace coorbit {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
using Vec4 = Vec<4>;
using Mat4 = Mat<4>;
using Vec5 = Vec<5>;
using Mat5 = Mat<5>;
using Eigen::MatrixXd;
using Eigen::VectorXd;

enum class FlavorKind { Poincare, G1, GOmega, G0 };

struct Flavor {
  FlavorKind kind = FlavorKind::Poincare;
  double omega = 1.0;

  static Flavor poincare() { return {FlavorKind::Poincare, 1.0}; }
  static Flavor g1() { return {FlavorKind::G1, 1.0}; }
  static Flavor gomega(double w) {
    if (!(w > 0)) throw validation_error("GOmega needs omega > 0");
    return {FlavorKind::GOmega, w};
  }
  static Flavor g0() { return {FlavorKind::G0, 0.0}; }

  // Dimension of the affine space acted on.
  int space_dim() const { return kind == FlavorKind::Poincare ? 4 : 5; }
  int algebra_dim() const { return kind == FlavorKind::Poincare ? 10 : 15; }
  bool five_dim() const { return kind != FlavorKind::Poincare; }
  // G1 and GOmega share all formulas; G0 is their w -> 0 contraction.
  bool pseudo_orthogonal() const { return kind == FlavorKind::G1 || kind == FlavorKind::GOmega; }
  double w2() const { return pseudo_orthogonal() ? omega * omega : 0.0; }

  std::string name() const {
    switch (kind) {
      case FlavorKind::Poincare: return "Poincare";
      case FlavorKind::G1: return "G1";
      case FlavorKind::GOmega: return "GOmega";
      case FlavorKind::G0: return "G0";
    }
    return "?";
  }

  // G1 and GOmega(1) are the same group.
  friend bool same_group(const Flavor& a, const Flavor& b) {
    if (a.pseudo_orthogonal() && b.pseudo_orthogonal()) return a.omega == b.omega;
    return a.kind == b.kind;
  }
};

inline void require_same(const Flavor& a, const Flavor& b) {
  if (!same_group(a, b)) throw validation_error("flavor mismatch: " + a.name() + " vs " + b.name());
}

// Gram matrix the linear parts preserve (degenerate for G0).
inline MatrixXd flavor_gram(const Flavor& f) {
  if (f.kind == FlavorKind::Poincare) return minkowski().gram();
  MatrixXd g = MatrixXd::Zero(5, 5);
  g.topLeftCorner<4, 4>() = minkowski().gram();
  g(4, 4) = -f.w2();
  return g;
}

inline Metric<5> flavor_metric5(const Flavor& f) {
  if (!f.pseudo_orthogonal()) throw validation_error("Hodge undefined for degenerate metric");
  return omega_metric(f.omega);
}

// Boost with velocity v followed by spatial rotation R:
// [[g, g v^T R], [g v, (I + g^2/(g+1) v v^T) R]].
inline Mat4 lorentz_from_boost_rotation(const Vec3& v, const Mat3& r) {
  const double v2 = v.squaredNorm();
  if (!(v2 < 1.0)) throw validation_error("superluminal boost");
  if ((r.transpose() * r - Mat3::Identity()).cwiseAbs().maxCoeff() > 1e-12 || r.determinant() < 0)
    throw validation_error("R is not a rotation");
  const double g = 1.0 / std::sqrt(1.0 - v2);
  Mat4 p;
  p(0, 0) = g;
  p.block<1, 3>(0, 1) = g * v.transpose() * r;
  p.block<3, 1>(1, 0) = g * v;
  p.block<3, 3>(1, 1) = (Mat3::Identity() + g * g / (g + 1.0) * v * v.transpose()) * r;
  return p;
}

// Affine pair X -> C + P X. For five-dimensional flavors C = (C4, xi).
class GroupElement {
 public:
  // Validates membership.
  static GroupElement from_matrices(const Flavor& f, const VectorXd& c, const MatrixXd& p, double tol = 1e-12);
  // No membership check; for internal use on approximate elements.
  static GroupElement unchecked(const Flavor& f, const VectorXd& c, const MatrixXd& p) {
    GroupElement a;
    a.flavor_ = f;
    a.c_ = c;
    a.p_ = p;
    return a;
  }
  static GroupElement identity(const Flavor& f) {
    const int d = f.space_dim();
    return unchecked(f, VectorXd::Zero(d), MatrixXd::Identity(d, d));
  }

  const Flavor& flavor() const { return flavor_; }
  const VectorXd& C() const { return c_; }
  const MatrixXd& P() const { return p_; }

  // Blocks of the five-dimensional forms.
  Mat4 lorentz_block() const { return p_.topLeftCorner<4, 4>(); }
  Vec4 translation4() const { return c_.head<4>(); }
  double xi() const { return flavor_.five_dim() ? c_(4) : 0.0; }
  // b from the bottom row b* = b^T G.
  Vec4 boost() const {
    if (!flavor_.five_dim()) return Vec4::Zero();
    Vec4 bstar = p_.block<1, 4>(4, 0).transpose();
    return minkowski().raise(bstar);
  }
  double beta() const { return flavor_.five_dim() ? p_(4, 4) : 1.0; }

  // (d+1) x (d+1) homogeneous matrix.
  MatrixXd affine() const {
    const int d = flavor_.space_dim();
    MatrixXd m = MatrixXd::Identity(d + 1, d + 1);
    m.topLeftCorner(d, d) = p_;
    m.topRightCorner(d, 1) = c_;
    return m;
  }

  VectorXd act(const VectorXd& x) const { return c_ + p_ * x; }

 private:
  Flavor flavor_;
  VectorXd c_;
  MatrixXd p_;
};

// P* P - I with P* = G^-1 P^T G for the nondegenerate flavors.
inline double orthogonality_defect(const Flavor& f, const MatrixXd& p) {
  const MatrixXd g = flavor_gram(f);
  return (p.transpose() * g * p - g).cwiseAbs().maxCoeff();
}

// Max deviation from the flavor's membership conditions.
inline double membership_error(const Flavor& f, const VectorXd& c, const MatrixXd& p) {
  const int d = f.space_dim();
  if (c.size() != d || p.rows() != d || p.cols() != d) return INFINITY;
  const MatrixXd g = flavor_gram(f);
  if (f.kind == FlavorKind::G0) {
    // [[P, 0], [b*, 1]] with P Lorentz; then P^T G0 P = G0 and P e5 = e5 follow.
    double e = p.topRightCorner<4, 1>().cwiseAbs().maxCoeff();
    e = std::max(e, std::abs(p(4, 4) - 1.0));
    const Mat4 l = p.topLeftCorner<4, 4>();
    e = std::max(e, (l.transpose() * minkowski().gram() * l - minkowski().gram()).cwiseAbs().maxCoeff());
    e = std::max(e, (p.transpose() * g * p - g).cwiseAbs().maxCoeff());
    e = std::max(e, (p * Vec5::Unit(4) - Vec5::Unit(4)).cwiseAbs().maxCoeff());
    return e;
  }
  // P* P = I, written as G^-1 P^T G P - I so the scale matches the statement.
  return (g.inverse() * p.transpose() * g * p - MatrixXd::Identity(d, d)).cwiseAbs().maxCoeff();
}

inline double membership_error(const GroupElement& a) { return membership_error(a.flavor(), a.C(), a.P()); }

// Identity component: time orientation kept and det +1 on the Lorentz block.
inline bool in_identity_component(const GroupElement& a) {
  const Mat4 l = a.lorentz_block();
  if (a.flavor().kind == FlavorKind::G0 || a.flavor().kind == FlavorKind::Poincare)
    return l(0, 0) > 0 && l.determinant() > 0;
  return a.P()(0, 0) > 0 && a.P().determinant() > 0 && a.beta() > 0;
}

inline GroupElement GroupElement::from_matrices(const Flavor& f, const VectorXd& c, const MatrixXd& p, double tol) {
  const double scale = std::max(1.0, p.cwiseAbs().maxCoeff());
  if (membership_error(f, c, p) > tol * scale * scale) throw validation_error("matrix is not in the group " + f.name());
  auto a = unchecked(f, c, p);
  if (!in_identity_component(a)) throw validation_error("element outside the identity component");
  return a;
}

// Canonical parameters: translation C, fifth translation xi, Lorentz part P_L, boost b.
struct ElementParams {
  Vec4 C = Vec4::Zero();
  double xi = 0.0;
  Mat4 PL = Mat4::Identity();
  Vec4 b = Vec4::Zero();
};

inline GroupElement make_element(const Flavor& f, const ElementParams& prm) {
  const auto g = minkowski();
  if ((prm.PL.transpose() * g.gram() * prm.PL - g.gram()).cwiseAbs().maxCoeff() > 1e-12 * std::max(1.0, prm.PL.squaredNorm()))
    throw validation_error("P_L is not a Lorentz transformation");
  if (!(prm.PL(0, 0) > 0 && prm.PL.determinant() > 0)) throw validation_error("P_L outside the identity component");

  if (f.kind == FlavorKind::Poincare) return GroupElement::unchecked(f, prm.C, prm.PL);

  VectorXd c(5);
  c << prm.C, prm.xi;
  MatrixXd p = MatrixXd::Zero(5, 5);
  const Eigen::RowVector4d bstar = g.lower(prm.b).transpose();
  if (f.kind == FlavorKind::G0) {
    p.topLeftCorner<4, 4>() = prm.PL;
    p.block<1, 4>(4, 0) = bstar;
    p(4, 4) = 1.0;
    return GroupElement::unchecked(f, c, p);
  }
  // [[P, w^2 beta P*^-1 b], [b*, beta]], P = P_L B, B = I + w^2 b b* / (beta + 1)
  const double w2 = f.w2();
  const double arg = 1.0 + w2 * bstar.dot(prm.b);
  if (!(arg > 0)) throw validation_error("invalid boost parameter");
  const double beta = std::sqrt(arg);
  const Mat4 bmat = Mat4::Identity() + w2 / (beta + 1.0) * prm.b * bstar;
  const Mat4 pmat = prm.PL * bmat;
  // P*^-1 = (G^-1 P^T G)^-1 = G^-1 P^-T G
  const Mat4 pstar_inv = g.inverse() * pmat.transpose().inverse() * g.gram();
  p.topLeftCorner<4, 4>() = pmat;
  p.block<4, 1>(0, 4) = w2 * beta * pstar_inv * prm.b;
  p.block<1, 4>(4, 0) = bstar;
  p(4, 4) = beta;
  return GroupElement::unchecked(f, c, p);
}

inline GroupElement make_poincare(const Vec4& c, const Mat4& pl) {
  ElementParams prm;
  prm.C = c;
  prm.PL = pl;
  return make_element(Flavor::poincare(), prm);
}

// (C1 + P1 C2, P1 P2)
inline GroupElement compose(const GroupElement& a1, const GroupElement& a2) {
  require_same(a1.flavor(), a2.flavor());
  return GroupElement::unchecked(a1.flavor(), a1.C() + a1.P() * a2.C(), a1.P() * a2.P());
}

// (-P^-1 C, P^-1), with P^-1 taken from the group structure rather than LU.
inline GroupElement inverse(const GroupElement& a) {
  const Flavor& f = a.flavor();
  MatrixXd pinv;
  if (f.kind == FlavorKind::G0) {
    // [[P, 0], [b*, 1]]^-1 = [[P^-1, 0], [-b* P^-1, 1]]
    const auto g = minkowski();
    const Mat4 l = a.lorentz_block();
    const Mat4 linv = g.inverse() * l.transpose() * g.gram();
    pinv = MatrixXd::Identity(5, 5);
    pinv.topLeftCorner<4, 4>() = linv;
    pinv.block<1, 4>(4, 0) = -a.P().block<1, 4>(4, 0) * linv;
  } else {
    const MatrixXd g = flavor_gram(f);
    pinv = g.inverse() * a.P().transpose() * g;
  }
  return GroupElement::unchecked(f, -pinv * a.C(), pinv);
}

// Boost parameter of a G0 product: b = P2^-1 b1 + b2, from the bottom row b1* P2 + b2*.
inline Vec4 g0_composed_boost(const Vec4& b1, const Mat4& p2, const Vec4& b2) {
  const auto g = minkowski();
  return g.inverse() * p2.transpose() * g.gram() * b1 + b2;
}

// Lie algebra element (dC, dP) acting as X -> dC + dP X.
struct AlgebraElement {
  Flavor flavor;
  VectorXd dC;
  MatrixXd dP;

  MatrixXd affine() const {
    const int d = flavor.space_dim();
    MatrixXd m = MatrixXd::Zero(d + 1, d + 1);
    m.topLeftCorner(d, d) = dP;
    m.topRightCorner(d, 1) = dC;
    return m;
  }
  double dxi() const { return flavor.five_dim() ? dC(4) : 0.0; }
  Vec4 db() const {
    if (!flavor.five_dim()) return Vec4::Zero();
    return minkowski().raise(dP.block<1, 4>(4, 0).transpose());
  }
};

inline AlgebraElement algebra_from_affine(const Flavor& f, const MatrixXd& m) {
  const int d = f.space_dim();
  return {f, m.topRightCorner(d, 1), m.topLeftCorner(d, d)};
}

// Deviation from the algebra's block and skew-adjointness conditions.
inline double algebra_defect(const AlgebraElement& z) {
  const auto g = minkowski();
  const Mat4 dp = z.dP.topLeftCorner<4, 4>();
  double e = skew_adjoint_defect(dp, g);
  if (!z.flavor.five_dim()) return e;
  const Vec4 db = z.db();
  e = std::max(e, std::abs(z.dP(4, 4)));
  const Vec4 expect_col = z.flavor.kind == FlavorKind::G0 ? Vec4::Zero() : Vec4(z.flavor.w2() * db);
  e = std::max(e, (z.dP.block<4, 1>(0, 4) - expect_col).cwiseAbs().maxCoeff());
  return e;
}

// 4 translations, 3 boosts, 3 rotations; then xi and the four db directions.
inline std::vector<AlgebraElement> algebra_basis(const Flavor& f) {
  const int d = f.space_dim();
  const auto g = minkowski();
  std::vector<AlgebraElement> basis;
  auto blank = [&] { return AlgebraElement{f, VectorXd::Zero(d), MatrixXd::Zero(d, d)}; };
  for (int k = 0; k < 4; ++k) {
    auto z = blank();
    z.dC(k) = 1.0;
    basis.push_back(z);
  }
  // dP = G^-1 (E_ij - E_ji): (0,k) are boosts, (k,l) rotations.
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j) {
      Mat4 a = Mat4::Zero();
      a(i, j) = 1.0;
      a(j, i) = -1.0;
      auto z = blank();
      z.dP.topLeftCorner<4, 4>() = g.inverse() * a;
      basis.push_back(z);
    }
  if (!f.five_dim()) return basis;
  auto z = blank();
  z.dC(4) = 1.0;
  basis.push_back(z);
  for (int k = 0; k < 4; ++k) {
    auto zb = blank();
    const Vec4 db = Vec4::Unit(k);
    zb.dP.block<1, 4>(4, 0) = g.lower(db).transpose();
    if (f.pseudo_orthogonal()) zb.dP.block<4, 1>(0, 4) = f.w2() * db;
    basis.push_back(zb);
  }
  return basis;
}

// Ad(a) Z = a Z a^-1 on homogeneous matrices.
inline AlgebraElement adjoint_action(const GroupElement& a, const AlgebraElement& z) {
  require_same(a.flavor(), z.flavor);
  return algebra_from_affine(a.flavor(), a.affine() * z.affine() * inverse(a).affine());
}

// (I + t dP + t^2 dP^2 / 2, t dC + t^2 dP dC / 2): second-order exponential.
inline GroupElement exp_approx(const AlgebraElement& z, double t) {
  const int d = z.flavor.space_dim();
  const MatrixXd p = MatrixXd::Identity(d, d) + t * z.dP + 0.5 * t * t * z.dP * z.dP;
  const VectorXd c = t * z.dC + 0.5 * t * t * z.dP * z.dC;
  return GroupElement::unchecked(z.flavor, c, p);
}

}  // namespace coorbit
