#pragma once

// Curvature, stress tensors and pointwise residuals of the coupled
// gravito-electromagnetic field equations. All raising is by G^-1.

#include <Eigen/Dense>

#include <cmath>
#include <functional>
#include <limits>
#include <numbers>

#include "coorbit/connection.hpp"
#include "coorbit/errors.hpp"

namespace coorbit {

struct CouplingConstants {
  double kappa = 8 * std::numbers::pi;
  double k_tilde = 8 * std::numbers::pi;
  double epsilon0 = 1.0;
  double Lambda = 0.0;
  double G_N = 1.0;

  // kappa = 8 pi G_N and k_tilde = kappa eps0.
  static CouplingConstants maxwell_limit(double g_n = 1.0, double eps0 = 1.0, double lambda = 0.0) {
    if (!(g_n > 0) || !(eps0 > 0)) throw validation_error("G_N and epsilon0 must be positive");
    const double k = 8 * std::numbers::pi * g_n;
    return {k, k * eps0, eps0, lambda, g_n};
  }
};

struct MatterState {
  double rho = 0.0;
  double p = 0.0;
  double rho_e = 0.0;
  Vec4 U = Vec4::Unit(0);
};

// Matter as callables of position, for laws that need its derivatives.
struct MatterField {
  std::function<double(const Vec4&)> rho;
  std::function<double(const Vec4&)> p;
  std::function<double(const Vec4&)> rho_e;
  std::function<Vec4(const Vec4&)> U;

  MatterState at(const Vec4& x) const {
    return {rho ? rho(x) : 0.0, p ? p(x) : 0.0, rho_e ? rho_e(x) : 0.0, U ? U(x) : Vec4(Vec4::Unit(0))};
  }
};

inline MatterField vacuum_field() { return {}; }

struct Curvature {
  Rank4 R;  // R[p][i](j, k) = R^p_ijk
  Mat4 ricci;
  double scalar = 0.0;
};

// R^p_ijk = Gamma^p_im Gamma^m_jk - Gamma^p_jm Gamma^m_ik + d_i Gamma^p_jk - d_j Gamma^p_ik,
// R_jk = R^p_pjk, R = G^jk R_jk.
inline Curvature riemann(const SpacetimeFields& f, const Vec4& x) {
  const Rank3 g = christoffel(f, x);
  const Rank4 dg = christoffel_d(f, x);
  Curvature c;
  c.R = zero_rank4();
  for (int p = 0; p < 4; ++p)
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j)
        for (int k = 0; k < 4; ++k) {
          double v = dg[i][p](j, k) - dg[j][p](i, k);
          for (int m = 0; m < 4; ++m) v += g[p](i, m) * g[m](j, k) - g[p](j, m) * g[m](i, k);
          c.R[p][i](j, k) = v;
        }
  c.ricci = Mat4::Zero();
  for (int p = 0; p < 4; ++p) c.ricci += c.R[p][p];
  c.scalar = (f.G_inv(x).cwiseProduct(c.ricci)).sum();
  return c;
}

// max |R^p_ijk + R^p_jki + R^p_kij|
inline double first_bianchi_defect(const Curvature& c) {
  double worst = 0;
  for (int p = 0; p < 4; ++p)
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j)
        for (int k = 0; k < 4; ++k)
          worst = std::max(worst, std::abs(c.R[p][i](j, k) + c.R[p][j](k, i) + c.R[p][k](i, j)));
  return worst;
}

// [k](j, i) = d_k F_ji
inline Rank3 em_field_d(const SpacetimeFields& f, const Vec4& x) {
  const Rank3 dd = f.ddA(x);
  Rank3 out;
  for (int k = 0; k < 4; ++k) out[k] = dd[k] - dd[k].transpose();
  return out;
}

struct TildeCurvature {
  Rank3 R;  // R[i](j, k) = Rt_ijk
  double scalar = 0.0;
};

// Rt_ijk = nabla_k F_ji + 2 A_q R^q_ijk; Rt = A_r G^ri G^jk Rt_ijk.
inline TildeCurvature tilde_riemann(const SpacetimeFields& f, const Vec4& x, const Curvature& curv) {
  const Rank3 g = christoffel(f, x);
  const Rank3 dF = em_field_d(f, x);
  const Mat4 F = em_field(f, x);
  const Vec4 a = f.A(x);
  const Mat4 gi = f.G_inv(x);
  TildeCurvature t;
  t.R = zero_rank3();
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      for (int k = 0; k < 4; ++k) {
        double v = dF[k](j, i);
        for (int m = 0; m < 4; ++m) v -= g[m](k, j) * F(m, i) + g[m](k, i) * F(j, m);
        for (int q = 0; q < 4; ++q) v += 2 * a(q) * curv.R[q][i](j, k);
        t.R[i](j, k) = v;
      }
  const Vec4 a_up = gi * a;
  for (int i = 0; i < 4; ++i) t.scalar += a_up(i) * gi.cwiseProduct(t.R[i]).sum();
  return t;
}

inline TildeCurvature tilde_riemann(const SpacetimeFields& f, const Vec4& x) {
  return tilde_riemann(f, x, riemann(f, x));
}

// kappa [(rho + p) U^i U^j - p G^ij]
inline Mat4 stress_matter(const MatterState& m, const Mat4& metric, double kappa) {
  if (m.rho != 0 || m.p != 0 || m.rho_e != 0) {
    if (std::abs(m.U.dot(metric * m.U) - 1.0) > 1e-10) throw validation_error("matter velocity is not unit");
  }
  if (m.rho < 0) throw validation_error("energy density must be non-negative");
  return kappa * ((m.rho + m.p) * m.U * m.U.transpose() - m.p * metric.inverse());
}

// -[R^ij - R G^ij / 2 + Lambda G^ij]
//   + k_tilde [A^(i Rt^j)k_k + A_r Rt^r(ij) - Rt G^ij / 2], (..) symmetrising with 1/2.
inline Mat4 stress_geom(const SpacetimeFields& f, const Vec4& x, const CouplingConstants& k) {
  const Curvature c = riemann(f, x);
  const TildeCurvature t = tilde_riemann(f, x, c);
  const Mat4 gi = f.G_inv(x);
  const Mat4 ricci_up = gi * c.ricci * gi;
  const Vec4 a = f.A(x);
  const Vec4 a_up = gi * a;
  Vec4 trace_low;  // G^kc Rt_ack
  Mat4 ar = Mat4::Zero();  // A_r Rt^rij
  for (int b = 0; b < 4; ++b) {
    trace_low(b) = gi.cwiseProduct(t.R[b]).sum();
    ar += a_up(b) * gi * t.R[b] * gi;
  }
  const Vec4 trace_up = gi * trace_low;  // Rt^jk_k
  const Mat4 coupling = 0.5 * (a_up * trace_up.transpose() + trace_up * a_up.transpose()) +
                        0.5 * (ar + ar.transpose()) - 0.5 * t.scalar * gi;
  return -(ricci_up - 0.5 * c.scalar * gi + k.Lambda * gi) + k.k_tilde * coupling;
}

// Left minus right of the coupled Einstein equation; zero for exact solutions.
inline Mat4 einstein_residual(const SpacetimeFields& f, const MatterState& m, const CouplingConstants& k,
                              const Vec4& x) {
  return -stress_geom(f, x, k) - stress_matter(m, f.G(x), k.kappa);
}

// nabla_j F^ji
inline Vec4 maxwell_divergence(const SpacetimeFields& f, const Vec4& x) {
  const Mat4 gi = f.G_inv(x);
  const Rank3 dG = f.dG(x);
  const Rank3 dF = em_field_d(f, x);
  const Mat4 F = em_field(f, x);
  const Rank3 g = christoffel(f, x);
  const Mat4 f_up = gi * F * gi;
  Vec4 div = Vec4::Zero();
  for (int j = 0; j < 4; ++j) {
    const Mat4 dgi = -gi * dG[j] * gi;
    const Mat4 d_up = dgi * F * gi + gi * dF[j] * gi + gi * F * dgi;
    div += d_up.row(j).transpose();
  }
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      for (int m = 0; m < 4; ++m) div(i) += g[j](j, m) * f_up(m, i) + g[i](j, m) * f_up(j, m);
  return div;
}

// 2 A_q R^qij_j = 2 A_q G^ia G^jb R^q_abj
inline Vec4 maxwell_coupling(const SpacetimeFields& f, const Vec4& x, const Curvature& c) {
  const Mat4 gi = f.G_inv(x);
  const Vec4 a = f.A(x);
  Vec4 out = Vec4::Zero();
  for (int q = 0; q < 4; ++q) {
    if (a(q) == 0) continue;
    Vec4 contracted = Vec4::Zero();  // R^q_a.b_j with b raised and contracted against j
    for (int aa = 0; aa < 4; ++aa) contracted(aa) = gi.cwiseProduct(c.R[q][aa]).sum();
    out += 2 * a(q) * gi * contracted;
  }
  return out;
}

// -k_tilde [nabla_j F^ji + 2 A_q R^qij_j] + kappa rho_e U^i
inline Vec4 maxwell_residual(const SpacetimeFields& f, const MatterState& m, const CouplingConstants& k,
                             const Vec4& x) {
  return -k.k_tilde * (maxwell_divergence(f, x) + maxwell_coupling(f, x, riemann(f, x))) +
         k.kappa * m.rho_e * m.U;
}

// nabla_i [(rho + p) U^i U_j - p delta^i_j] - rho_e U^k F_kj, as a covector.
inline Vec4 matter_conservation_residual(const SpacetimeFields& f, const MatterField& mf, const Vec4& x) {
  auto mixed = [&](const Vec4& y) -> Mat4 {  // (i, j) = T^i_j
    const MatterState m = mf.at(y);
    const Vec4 u_low = f.G(y) * m.U;
    return (m.rho + m.p) * m.U * u_low.transpose() - m.p * Mat4::Identity();
  };
  const double h = f.step_at(x);
  Vec4 div = Vec4::Zero();
  for (int i = 0; i < 4; ++i) {
    const Vec4 e = h * Vec4::Unit(i);
    Mat4 d = (mixed(x + e) - mixed(x - e)) / (2 * h);
    if (f.richardson) {
      const Mat4 half = (mixed(x + e / 2) - mixed(x - e / 2)) / h;
      d = (4.0 * half - d) / 3.0;
    }
    div += d.row(i).transpose();
  }
  const Rank3 g = christoffel(f, x);
  const Mat4 t = mixed(x);
  for (int j = 0; j < 4; ++j)
    for (int i = 0; i < 4; ++i)
      for (int m = 0; m < 4; ++m) div(j) += g[i](i, m) * t(m, j) - g[m](i, j) * t(i, m);
  const MatterState m = mf.at(x);
  return div - m.rho_e * em_field(f, x).transpose() * m.U;
}

struct NewtonianReport {
  Vec4 maxwell_term;   // nabla_j F^ji
  Vec4 coupling_term;  // 2 A_q R^qij_j
  double maxwell_norm = 0.0;
  double coupling_norm = 0.0;
  double ratio = 0.0;          // coupling / Maxwell
  double gravity_scale = 0.0;  // max |G - eta|
  Vec4 residual;
};

inline NewtonianReport newtonian_limit_report(const SpacetimeFields& f, const MatterState& m,
                                              const CouplingConstants& k, const Vec4& x) {
  NewtonianReport r;
  r.maxwell_term = maxwell_divergence(f, x);
  r.coupling_term = maxwell_coupling(f, x, riemann(f, x));
  r.maxwell_norm = r.maxwell_term.cwiseAbs().maxCoeff();
  r.coupling_norm = r.coupling_term.cwiseAbs().maxCoeff();
  r.ratio = r.maxwell_norm > 0 ? r.coupling_norm / r.maxwell_norm : std::numeric_limits<double>::infinity();
  r.gravity_scale = (f.G(x) - presets::eta()).cwiseAbs().maxCoeff();
  r.residual = -k.k_tilde * (r.maxwell_term + r.coupling_term) + k.kappa * m.rho_e * m.U;
  return r;
}

struct ResidualNorms {
  double einstein = 0.0;
  double maxwell = 0.0;
  double conservation = 0.0;
  double metric_compat = 0.0;
  double torsion = 0.0;

  double max() const { return std::max({einstein, maxwell, conservation, metric_compat, torsion}); }
};

inline ResidualNorms residual_norms(const SpacetimeFields& f, const MatterField& mf, const CouplingConstants& k,
                                    const Vec4& x) {
  const MatterState m = mf.at(x);
  return {einstein_residual(f, m, k, x).cwiseAbs().maxCoeff(), maxwell_residual(f, m, k, x).cwiseAbs().maxCoeff(),
          matter_conservation_residual(f, mf, x).cwiseAbs().maxCoeff(), metric_compatibility_residual(f, x),
          torsion_residual(f, x)};
}

}  // namespace coorbit
