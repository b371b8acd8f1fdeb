#include <gtest/gtest.h>

#include <cmath>

#include "coorbit/connection.hpp"
#include "coorbit/sampling.hpp"

using namespace coorbit;

namespace {

double max_abs(const Rank3& t) {
  double m = 0;
  for (const auto& s : t) m = std::max(m, s.cwiseAbs().maxCoeff());
  return m;
}

// Gamma^k_ij = d^k_i c_j + d^k_j c_i - eta_ij eta^kr c_r for G = exp(2 c.X) eta.
Rank3 conformal_christoffel(const Vec4& c) {
  const Mat4 eta = presets::eta();
  const Vec4 up = eta * c;
  Rank3 t = zero_rank3();
  for (int k = 0; k < 4; ++k)
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j)
        t[k](i, j) = (k == i ? c(j) : 0.0) + (k == j ? c(i) : 0.0) - eta(i, j) * up(k);
  return t;
}

// Smooth non-flat metric and potential with no analytic derivatives.
SpacetimeFields wavy_fields() {
  SpacetimeFields f;
  f.name = "wavy";
  f.metric = [](const Vec4& x) {
    Mat4 g = presets::eta();
    g(0, 0) = 1.0 + 0.1 * std::sin(x(1));
    g(1, 1) = -1.0 - 0.1 * std::cos(x(2));
    g(0, 2) = g(2, 0) = 0.05 * std::sin(x(0) + x(3));
    return g;
  };
  f.potential = [](const Vec4& x) {
    return Vec4(std::cos(x(1)), 0.3 * x(0) * x(2), std::sin(x(3)), 0.2 * x(1) * x(1));
  };
  return f;
}

GaugeFunction quadratic_gauge(const Mat4& h, const Vec4& c) {
  return {[h, c](const Vec4& x) { return Vec4(h * x + c); }, [h](const Vec4&) { return h; },
          [](const Vec4&) { return zero_rank3(); }};
}

}  // namespace

TEST(Christoffel, FlatIsZero) {
  EXPECT_EQ(max_abs(christoffel(presets::flat(), Vec4(1, 2, 3, 4))), 0.0);
}

TEST(Christoffel, ConformalClosedForm) {
  Sampler rng(11);
  for (int n = 0; n < 20; ++n) {
    const Vec4 c = rng.vec<4>(-0.3, 0.3);
    const Vec4 x = rng.vec<4>(-1, 1);
    const auto f = presets::conformal(c);
    const Rank3 got = christoffel(f, x), want = conformal_christoffel(c);
    for (int k = 0; k < 4; ++k) EXPECT_LT((got[k] - want[k]).cwiseAbs().maxCoeff(), 1e-13);
    // same fixture through finite differences
    const Rank3 fd = christoffel(finite_difference_mode(f, 1e-4), x);
    for (int k = 0; k < 4; ++k) EXPECT_LT((fd[k] - want[k]).cwiseAbs().maxCoeff(), 1e-7);
  }
}

TEST(Christoffel, SymmetricInLowerIndices) {
  const auto f = wavy_fields();
  const Rank3 g = christoffel(f, Vec4(0.3, -0.2, 0.5, 0.1));
  for (int k = 0; k < 4; ++k) EXPECT_LT((g[k] - g[k].transpose()).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(Christoffel, MetricCompatibility) {
  const Vec4 x(0.2, 0.4, -0.3, 0.7);
  EXPECT_LT(metric_compatibility_residual(presets::conformal(Vec4(0.1, -0.2, 0.05, 0.3)), x), 1e-10);
  EXPECT_LT(metric_compatibility_residual(presets::sphere(2.0), Vec4(0, 0.8, 0.3, 0)), 1e-10);
  const auto w = wavy_fields();
  const double h = w.step_at(x);
  EXPECT_LT(metric_compatibility_residual(w, x), 10 * h * h);
}

TEST(Christoffel, SingularMetricThrows) {
  SpacetimeFields f = presets::flat();
  f.metric = [](const Vec4&) { return Mat4::Zero().eval(); };
  EXPECT_THROW(christoffel(f, Vec4::Zero()), numerical_error);
}

TEST(EmField, ConstantPotentialHasNoField) {
  SpacetimeFields f = presets::flat();
  f.potential = [](const Vec4&) { return Vec4(1, 2, 3, 4); };
  f.potential_d = nullptr;
  EXPECT_LT(em_field(f, Vec4(0.1, 0.2, 0.3, 0.4)).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(EmField, UniformB) {
  const auto f = presets::uniform_b(1.7);
  const Vec4 x(0.3, 1.1, -0.4, 2.0);
  const auto em = electric_magnetic(f, x);
  EXPECT_LT((em.B - Eigen::Vector3d(0, 0, 1.7)).norm(), 1e-14);
  EXPECT_LT(em.E.norm(), 1e-14);
  // same through differences of the potential
  const auto fd = electric_magnetic(finite_difference_mode(f, 1e-4), x);
  EXPECT_LT((fd.B - Eigen::Vector3d(0, 0, 1.7)).norm(), 1e-9);
  const Mat4 F = em_field(f, x);
  EXPECT_LT((F + F.transpose()).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_DOUBLE_EQ(F(1, 2), -1.7);
}

TEST(EmField, CoulombE) {
  const double k = 0.8;
  const auto f = presets::coulomb(k);
  Sampler rng(12);
  for (int n = 0; n < 50; ++n) {
    Vec4 x = rng.vec<4>(-2, 2);
    if (x.tail<3>().norm() < 0.3) continue;
    const Eigen::Vector3d r = x.tail<3>();
    const Eigen::Vector3d want = k * r / std::pow(r.norm(), 3);
    EXPECT_LT((electric_magnetic(f, x).E - want).norm(), 1e-13);
    EXPECT_LT(electric_magnetic(f, x).B.norm(), 1e-15);
    EXPECT_LT((electric_magnetic(finite_difference_mode(f, 1e-4), x).E - want).norm(), 1e-6);
  }
}

TEST(Gamma5, FlatConstantPotentialVanishes) {
  SpacetimeFields f = presets::flat();
  f.potential = [](const Vec4&) { return Vec4(0.5, -1, 2, 0.1); };
  f.potential_d = [](const Vec4&) { return Mat4::Zero().eval(); };
  EXPECT_EQ(gamma5(f, Vec4::Zero()).cwiseAbs().maxCoeff(), 0.0);
}

TEST(Gamma5, UniformBDirectAndTorsion) {
  const auto f = presets::uniform_b(2.0);
  const Vec4 x(0, 0.5, -1.5, 0.2);
  const Mat4 F = em_field(f, x);
  EXPECT_LT((gamma5(f, x) - (F - 2.0 * f.dA(x))).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_LT(torsion_residual(f, x), 1e-10);
}

TEST(Gamma5, CurvedTorsionIdentity) {
  const auto f = wavy_fields();
  Sampler rng(13);
  for (int n = 0; n < 20; ++n) {
    const Vec4 x = rng.vec<4>(-1, 1);
    const double h = f.step_at(x);
    EXPECT_LT(torsion_residual(f, x), 10 * h * h);
  }
}

TEST(Motion, FreeParticleIsStraight) {
  const auto f = presets::flat();
  const auto st = make_state(f, Vec4::Zero(), Eigen::Vector3d(0.6, 0, 0), 0.0, 1.0);
  EXPECT_EQ(motion_rhs(st, f).second, Vec4::Zero());
  const auto tr = integrate_motion(st, f, 1e-3, 2000, 100);
  for (const auto& s : tr.states) EXPECT_LT((s.X - s.s * st.U).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Motion, UniformBForceIsBCrossU) {
  const double b0 = 1.3, q = 0.7, m0 = 1.9;
  const auto f = presets::uniform_b(b0);
  Sampler rng(14);
  for (int n = 0; n < 100; ++n) {
    const auto st = make_state(f, rng.vec<4>(-2, 2), rng.velocity(0.9), q, m0);
    const Vec4 du = motion_rhs(st, f).second;
    const Eigen::Vector3d ubar = st.U.tail<3>();
    const Eigen::Vector3d want = (q / m0) * Eigen::Vector3d(0, 0, b0).cross(ubar);
    EXPECT_LT((du.tail<3>() - want).norm(), 1e-13);
    EXPECT_NEAR(du.tail<3>().norm(), (q / m0) * b0 * ubar.head<2>().norm(), 1e-13);
    EXPECT_NEAR(du(0), 0.0, 1e-15);
  }
}

TEST(Motion, AccelerationIsOrthogonalToVelocity) {
  Sampler rng(15);
  const std::vector<SpacetimeFields> all = {presets::uniform_b(1.0), presets::coulomb(0.5),
                                            presets::conformal(Vec4(0.1, 0.2, -0.1, 0.05)), wavy_fields()};
  for (const auto& f : all) {
    for (int n = 0; n < 50; ++n) {
      Vec4 x = rng.vec<4>(-1, 1);
      x(1) += 2.0;  // away from the Coulomb pole
      const auto st = make_state(f, x, rng.velocity(0.8), rng.uniform(-2, 2), rng.uniform(0.5, 2));
      // dU/ds here is d/ds of the components; the covariant one is dU + Gamma(U)U
      const Vec4 acc = motion_rhs(st, f).second + contract_first(christoffel(f, x), st.U) * st.U;
      EXPECT_LT(std::abs(acc.dot(f.G(x) * st.U)), 1e-12) << f.name;
    }
  }
}

TEST(Motion, MeasuredForceMatchesField) {
  const auto f = presets::coulomb(1.0);
  auto st = make_state(f, Vec4(0, 2, 0, 0), Eigen::Vector3d(0, 0.4, 0.1), -1.0, 1.0);
  const auto tr = integrate_motion(st, f, 1e-3, 1000, 1);
  // central difference of the recorded velocities against the force law
  for (size_t i = 100; i + 1 < tr.states.size(); i += 100) {
    const auto& s = tr.states[i];
    const Vec4 du = (tr.states[i + 1].U - tr.states[i - 1].U) / 2e-3;
    const Vec4 force = -(s.q / s.m0) * f.G_inv(s.X) * em_field(f, s.X) * s.U;
    EXPECT_LT((du + contract_first(christoffel(f, s.X), s.U) * s.U - force).cwiseAbs().maxCoeff(), 1e-6);
  }
}

TEST(Motion, CyclotronRadiusAndHandedness) {
  const auto f = presets::uniform_b(1.0);
  const auto st = make_state(f, Vec4::Zero(), Eigen::Vector3d(0.6, 0, 0), 1.0, 1.0);
  const int steps = 7000;  // a bit over one period of 2 pi
  const auto tr = integrate_motion(st, f, 1e-3, steps, 10);
  std::vector<Eigen::Vector2d> pts;
  for (const auto& s : tr.states) pts.emplace_back(s.X(1), s.X(2));
  const auto [centre, radius] = fit_circle(pts);
  EXPECT_NEAR(radius / 0.75, 1.0, 1e-6);
  // positive charge moving along +x turns toward +y: counterclockwise about +B
  EXPECT_NEAR(centre(0), 0.0, 1e-6);
  EXPECT_NEAR(centre(1), 0.75, 1e-6);
  EXPECT_GT(tr.states[10].X(2), 0.0);
  EXPECT_LT(tr.max_norm_drift, 1e-9);
}

TEST(Motion, NormDriftOverTenThousandSteps) {
  const std::vector<SpacetimeFields> all = {presets::uniform_b(1.0), presets::coulomb(-0.3),
                                            presets::conformal(Vec4(0.02, 0.05, 0, -0.03))};
  for (const auto& f : all) {
    const auto st = make_state(f, Vec4(0, 1.5, 0.2, 0), Eigen::Vector3d(0.1, 0.5, 0), 1.0, 1.0);
    const auto tr = integrate_motion(st, f, 1e-3, 10000, 1000);
    EXPECT_LT(tr.max_norm_drift, 1e-9) << f.name;
    for (const auto& s : tr.states) {
      EXPECT_EQ(s.q, st.q);
      EXPECT_EQ(s.m0, st.m0);
    }
    EXPECT_NEAR(tr.states.back().s, 10.0, 1e-9);
  }
}

TEST(Motion, StateRejections) {
  const auto f = presets::flat();
  EXPECT_THROW(make_state(f, Vec4::Zero(), Eigen::Vector3d(1, 0, 0), 0, 1), validation_error);
  EXPECT_THROW(make_state(f, Vec4::Zero(), Eigen::Vector3d(0.1, 0, 0), 0, 0), validation_error);
  EXPECT_THROW(integrate_motion(make_state(f, Vec4::Zero(), Eigen::Vector3d::Zero(), 0, 1), f, 0.0, 10),
               validation_error);
}

TEST(Motion, SingularMetricAbortsWithPosition) {
  SpacetimeFields f = presets::flat();
  f.metric = [](const Vec4& x) {
    Mat4 g = presets::eta();
    g(1, 1) = -(1.0 - x(0));  // degenerates at t = 1
    return g;
  };
  f.metric_d = nullptr;
  f.metric_dd = nullptr;
  const auto st = make_state(f, Vec4::Zero(), Eigen::Vector3d(0.1, 0, 0), 0, 1);
  try {
    integrate_motion(st, f, 1e-2, 1000);
    FAIL() << "expected numerical_error";
  } catch (const numerical_error& e) {
    EXPECT_NE(std::string(e.what()).find("X ="), std::string::npos);
  }
}

TEST(Transport, GeodesicWithoutCharge) {
  const auto f = presets::conformal(Vec4(0.05, 0.1, -0.05, 0.02));
  const auto st = make_state(f, Vec4(0, 0.2, 0.1, 0), Eigen::Vector3d(0.3, -0.2, 0.1), 0.0, 1.5);
  const auto tr = integrate_motion(st, f, 1e-3, 1000, 100);
  const auto pt = transport_5momentum(st, f, 1e-3, 1000, 100);
  ASSERT_EQ(tr.states.size(), pt.size());
  for (size_t i = 0; i < pt.size(); ++i) {
    EXPECT_LT((pt[i].U - tr.states[i].U).cwiseAbs().maxCoeff(), 1e-10);
    EXPECT_LT((pt[i].Pi - 1.5 * f.G(pt[i].X) * pt[i].U).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(Transport, CyclotronMatchesMotion) {
  const auto f = presets::uniform_b(1.0);
  const auto st = make_state(f, Vec4(0, 0.3, -0.2, 0), Eigen::Vector3d(0.6, 0, 0.1), 1.0, 1.0);
  const auto tr = integrate_motion(st, f, 1e-3, 1000, 10);
  const auto pt = transport_5momentum(st, f, 1e-3, 1000, 10);
  double worst = 0;
  for (size_t i = 0; i < pt.size(); ++i) {
    worst = std::max(worst, (pt[i].U - tr.states[i].U).cwiseAbs().maxCoeff());
    EXPECT_EQ(pt[i].q, st.q);
  }
  EXPECT_LT(worst, 1e-7);
}

TEST(Transport, CurvedChargedMatchesMotion) {
  const auto f = wavy_fields();
  const auto st = make_state(f, Vec4(0, 0.3, -0.2, 0.1), Eigen::Vector3d(0.2, 0.1, -0.3), 0.8, 1.2);
  const auto tr = integrate_motion(st, f, 1e-3, 1000, 100);
  const auto pt = transport_5momentum(st, f, 1e-3, 1000, 100);
  for (size_t i = 0; i < pt.size(); ++i) EXPECT_LT((pt[i].U - tr.states[i].U).cwiseAbs().maxCoeff(), 1e-7);
}

TEST(Gauge, ConstantShiftLeavesFieldsUnchanged) {
  const auto f = presets::uniform_b(1.0);
  const auto g = gauge_transform(f, quadratic_gauge(Mat4::Zero(), Vec4::Zero()));
  const Vec4 x(0.1, 0.2, 0.3, 0.4);
  EXPECT_EQ(g.A(x), f.A(x));
  EXPECT_EQ(g.G(x), f.G(x));
  EXPECT_EQ(em_field(g, x), em_field(f, x));
}

TEST(Gauge, LinearGaugeKeepsF) {
  const auto f = presets::coulomb(0.7);
  const auto g = gauge_transform(f, quadratic_gauge(Mat4::Zero(), Vec4(0.3, -1.2, 2.5, 0.4)));
  Sampler rng(16);
  for (int n = 0; n < 50; ++n) {
    Vec4 x = rng.vec<4>(-2, 2);
    x(3) += 3.0;
    EXPECT_LT((em_field(g, x) - em_field(f, x)).cwiseAbs().maxCoeff(), 1e-13);
    EXPECT_NE(g.A(x), f.A(x));
  }
}

TEST(Gauge, TrajectoryUnchanged) {
  Mat4 h;
  h << 0.2, 0.1, 0, -0.3, 0.1, -0.5, 0.4, 0, 0, 0.4, 0.3, 0.2, -0.3, 0, 0.2, 0.1;
  const auto f = presets::uniform_b(1.0);
  const auto g = gauge_transform(f, quadratic_gauge(h, Vec4(0.1, 0.2, 0.3, 0.4)));
  const auto st = make_state(f, Vec4(0, 0.5, 0.1, 0), Eigen::Vector3d(0.4, 0.3, 0), 1.0, 1.0);
  const auto a = integrate_motion(st, f, 1e-3, 1000, 1000);
  const auto b = integrate_motion(st, g, 1e-3, 1000, 1000);
  EXPECT_LT((a.states.back().X - b.states.back().X).cwiseAbs().maxCoeff(), 1e-8);
  // the 5-row shifts by -2 q dh, its transport gives the same path
  const auto pa = transport_5momentum(st, f, 1e-3, 1000, 1000);
  const auto pb = transport_5momentum(st, g, 1e-3, 1000, 1000);
  EXPECT_LT((pa.back().X - pb.back().X).cwiseAbs().maxCoeff(), 1e-8);
}

TEST(Presets, SphereMetricShape) {
  const auto f = presets::sphere(2.0);
  const Mat4 g = f.G(Vec4(0, 0.5, 1.0, 0));
  EXPECT_DOUBLE_EQ(g(1, 1), -4.0);
  EXPECT_DOUBLE_EQ(g(2, 2), -4.0 * std::sin(0.5) * std::sin(0.5));
}

TEST(Presets, RichardsonImprovesDifferences) {
  const auto f = presets::conformal(Vec4(0.3, -0.2, 0.4, 0.1));
  const Vec4 x(0.2, 0.1, -0.3, 0.5);
  auto plain = finite_difference_mode(f, 1e-2);
  auto rich = plain;
  rich.richardson = true;
  const Rank3 want = f.dG(x);
  double e_plain = 0, e_rich = 0;
  for (int r = 0; r < 4; ++r) {
    e_plain = std::max(e_plain, (plain.dG(x)[r] - want[r]).cwiseAbs().maxCoeff());
    e_rich = std::max(e_rich, (rich.dG(x)[r] - want[r]).cwiseAbs().maxCoeff());
  }
  EXPECT_LT(e_rich, e_plain / 100);
}
