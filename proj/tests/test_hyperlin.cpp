#include <gtest/gtest.h>

#include <cmath>

#include "coorbit/hyperlin.hpp"
#include "coorbit/sampling.hpp"

using namespace coorbit;

namespace {

// Brute-force determinant expansion, independent of the Levi-Civita machinery.
template <int N>
double oriented_det(const std::vector<Vec<N>>& cols, const Metric<N>& g) {
  Mat<N> m;
  for (int k = 0; k < N; ++k) m.col(k) = cols[k];
  return g.orientation() * std::sqrt(std::abs(g.det())) * m.determinant();
}

// J from J* U = vol(V..., U), solved column by column via determinants.
template <int N>
Vec<N> vector_product_oracle(const std::vector<Vec<N>>& vs, const Metric<N>& g) {
  Vec<N> lowered;
  for (int k = 0; k < N; ++k) {
    auto cols = vs;
    cols.push_back(Vec<N>::Unit(k));
    lowered(k) = oriented_det(cols, g);
  }
  return g.inverse() * lowered;
}

template <int N>
Metric<N> random_metric(Sampler& rng, int negatives) {
  // Diagonal signature conjugated by a random well-conditioned matrix.
  Mat<N> a = Mat<N>::Identity();
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) a(i, j) += 0.3 * rng.uniform(-1, 1);
  Vec<N> d = Vec<N>::Ones();
  for (int i = N - negatives; i < N; ++i) d(i) = -1;
  Mat<N> g = a.transpose() * d.asDiagonal() * a;
  g = 0.5 * (g + g.transpose()).eval();
  return Metric<N>(g, rng.uniform(-1, 1) < 0 ? -1 : 1, N - negatives);
}

template <int N>
std::vector<double> random_dense(Sampler& rng, int q) {
  std::vector<double> c(KForm<N>::ipow(N, q));
  for (double& x : c) x = rng.uniform(-1, 1);
  return c;
}

}  // namespace

TEST(Metric, RejectsBadInput) {
  Mat<4> g = minkowski().gram();
  g(0, 1) = 0.1;
  EXPECT_THROW(Metric<4>{g}, validation_error);
  EXPECT_THROW(Metric<4>(Mat<4>::Zero()), validation_error);
  EXPECT_THROW(Metric<4>(minkowski().gram(), 1, 3), validation_error);
  EXPECT_EQ(minkowski().positive(), 1);
  EXPECT_EQ(omega_metric(0.5).positive(), 1);
}

TEST(Adjoint, IdentityAndIndexLowering) {
  auto g = minkowski();
  EXPECT_EQ(adjoint(Mat<4>::Identity().eval(), g), Mat<4>::Identity());
  Eigen::Matrix<double, 4, 1> u(1, 2, 3, 4);
  Metric<1> one(Mat<1>::Identity());
  Eigen::Matrix<double, 1, 4> ustar = adjoint<4, 1>(u, one, g);
  EXPECT_EQ(ustar, (u.transpose() * g.gram()).eval());
}

TEST(Adjoint, InvolutionAndTrace) {
  Sampler rng(1);
  for (int n = 0; n < 100; ++n) {
    auto g = random_metric<4>(rng, 3);
    Mat<4> a = Mat<4>::Random();
    EXPECT_LT((adjoint(adjoint(a, g), g) - a).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_NEAR(adjoint(a, g).trace(), a.trace(), 1e-12);
  }
  auto a = minkowski();
  Mat<4> r = Mat<4>::Random();
  EXPECT_LT((adjoint(adjoint(r, a), a) - r).cwiseAbs().maxCoeff(), 1e-13);
}

TEST(Adjoint, SemiMetricRejected) {
  auto s = g0_semimetric();
  EXPECT_THROW((adjoint<5, 5>(Mat<5>::Identity().eval(), s, s)), validation_error);
}

TEST(VolumeForm, Normalization) {
  EXPECT_DOUBLE_EQ(volume_form(minkowski())({0, 1, 2, 3}), 1.0);
  EXPECT_DOUBLE_EQ(volume_form(minkowski())({1, 0, 2, 3}), -1.0);
  EXPECT_NEAR(volume_form(omega_metric(0.3))({0, 1, 2, 3, 4}), 0.3, 1e-15);
  EXPECT_DOUBLE_EQ(volume_form(euclidean<3>())({0, 1, 2}), 1.0);
  EXPECT_DOUBLE_EQ(volume_form(minkowski(-1))({0, 1, 2, 3}), -1.0);
}

TEST(KForm, AntisymmetryEnforced) {
  std::vector<double> c(16, 0.0);
  c[1] = 1.0;  // (0,1) without (1,0)
  EXPECT_THROW(KForm<4>::from_dense(2, c), validation_error);
  c[4] = -1.0;
  EXPECT_NO_THROW(KForm<4>::from_dense(2, c));
}

TEST(VectorProduct, CrossProductIn3D) {
  auto g = euclidean<3>();
  EXPECT_EQ(vector_product<3>({Vec<3>::Unit(0), Vec<3>::Unit(1)}, g), Vec<3>::Unit(2));
  Vec<3> u(1, 2, 3), v(-1, 0.5, 2);
  EXPECT_LT((vector_product<3>({u, v}, g) - u.cross(v)).norm(), 1e-14);
  EXPECT_LT((vector_product_map<3>({u}, g) * v - u.cross(v)).norm(), 1e-14);
}

TEST(VectorProduct, SpatialTripleInMinkowski) {
  std::vector<Vec<4>> spatial = {Vec<4>::Unit(1), Vec<4>::Unit(2), Vec<4>::Unit(3)};
  // With vol(e_t, e_x, e_y, e_z) = +1 the spatial triple points to the past.
  EXPECT_EQ(vector_product<4>(spatial, minkowski()), Vec<4>(-1, 0, 0, 0));
  // The block formula for (0, e_k) gives (1, 0, 0, 0): it is the orientation
  // obtained by appending time after the three space directions.
  EXPECT_EQ(vector_product<4>(spatial, minkowski(-1)), Vec<4>(1, 0, 0, 0));
}

TEST(VectorProduct, BlockFormula4D) {
  // J(P1, P2, P3) = [[ vol3(p1,p2,p3) ], [ m1 j(p2,p3) + m2 j(p3,p1) + m3 j(p1,p2) ]]
  // for P_k = (m_k, p_k) under the orientation vol(e_x, e_y, e_z, e_t) = 1.
  Sampler rng(2);
  auto g = minkowski(-1);
  for (int n = 0; n < 50; ++n) {
    std::vector<Vec<4>> ps = {rng.vec<4>(), rng.vec<4>(), rng.vec<4>()};
    Eigen::Vector3d p1 = ps[0].tail<3>(), p2 = ps[1].tail<3>(), p3 = ps[2].tail<3>();
    double m1 = ps[0](0), m2 = ps[1](0), m3 = ps[2](0);
    Vec<4> expect;
    expect(0) = p1.dot(p2.cross(p3));
    expect.tail<3>() = m1 * p2.cross(p3) + m2 * p3.cross(p1) + m3 * p1.cross(p2);
    EXPECT_LT((vector_product(ps, g) - expect).cwiseAbs().maxCoeff(), 1e-13);
  }
}

TEST(VectorProduct, MatchesDefinitionOmegaMetric) {
  Sampler rng(3);
  for (double w : {1.0, 0.5, 0.1}) {
    auto g = omega_metric(w);
    for (int n = 0; n < 100; ++n) {
      std::vector<Vec<5>> vs = {rng.vec<5>(), rng.vec<5>(), rng.vec<5>(), rng.vec<5>()};
      EXPECT_LT((vector_product(vs, g) - vector_product_oracle(vs, g)).cwiseAbs().maxCoeff(), 1e-12);
    }
  }
}

TEST(VectorProductMap, BlockFormula5D) {
  // V -> J(P1, P2, P3, V) in 5D with P_k = (Pi_k, q_k):
  // w [[ q1 J(Pi2,Pi3) - q2 J(Pi1,Pi3) + q3 J(Pi1,Pi2), -J(Pi1,Pi2,Pi3) ],
  //     [ -w^-2 J(Pi1,Pi2,Pi3)*,                          0               ]]
  // The overall factor w comes from sqrt|det G|; it is 1 for the unit fifth direction.
  Sampler rng(4);
  for (int orient : {1, -1})
    for (double w : {1.0, 0.5, 0.1}) {
      auto g = minkowski(orient);
      auto gh = omega_metric(w, orient);
      for (int n = 0; n < 20; ++n) {
        std::vector<Vec<5>> hat = {rng.vec<5>(), rng.vec<5>(), rng.vec<5>()};
        std::vector<Vec<4>> p(3);
        for (int k = 0; k < 3; ++k) p[k] = hat[k].head<4>();
        Vec<4> j3 = vector_product(p, g);
        Mat<5> expect = Mat<5>::Zero();
        expect.topLeftCorner<4, 4>() = hat[0](4) * vector_product_map<4>({p[1], p[2]}, g) -
                                       hat[1](4) * vector_product_map<4>({p[0], p[2]}, g) +
                                       hat[2](4) * vector_product_map<4>({p[0], p[1]}, g);
        expect.topRightCorner<4, 1>() = -j3;
        expect.bottomLeftCorner<1, 4>() = -g.lower(j3).transpose() / (w * w);
        expect *= w;
        EXPECT_LT((vector_product_map<5>(hat, gh) - expect).cwiseAbs().maxCoeff(), 1e-12) << orient << " " << w;
      }
    }
}

TEST(VectorProduct, Orthogonality) {
  Sampler rng(5);
  auto g = minkowski();
  for (int n = 0; n < 100; ++n) {
    std::vector<Vec<4>> vs = {rng.vec<4>(), rng.vec<4>(), rng.vec<4>()};
    Vec<4> j = vector_product(vs, g);
    for (const auto& v : vs) EXPECT_NEAR(g.dot(j, v), 0.0, 1e-13);
  }
}

TEST(VectorProduct, ZeroIffDependent) {
  Sampler rng(6);
  auto g = omega_metric(0.5);
  for (int n = 0; n < 100; ++n) {
    std::vector<Vec<5>> vs = {rng.vec<5>(), rng.vec<5>(), rng.vec<5>(), rng.vec<5>()};
    Eigen::MatrixXd cols(5, 4);
    for (int k = 0; k < 4; ++k) cols.col(k) = vs[k];
    EXPECT_EQ(svd_rank(cols), 4);
    EXPECT_GT(vector_product(vs, g).norm(), 1e-10);
    vs[3] = 0.3 * vs[0] - 1.2 * vs[2];
    EXPECT_LT(vector_product(vs, g).norm(), 1e-13);
  }
}

TEST(VectorProductMap, SkewAdjointAndColumns) {
  Sampler rng(7);
  auto g = minkowski();
  for (int n = 0; n < 100; ++n) {
    Vec<4> p1 = rng.vec<4>(), p2 = rng.vec<4>();
    Mat<4> m = vector_product_map<4>({p1, p2}, g);
    EXPECT_LT(skew_adjoint_defect(m, g), 1e-13);
    for (int k = 0; k < 4; ++k)
      EXPECT_LT((m.col(k) - vector_product<4>({p1, p2, Vec<4>::Unit(k)}, g)).norm(), 1e-14);
  }
}

TEST(VectorProductMap, BlockFormula4D) {
  // J(P1, P2) = [[0, j(p1,p2)^T], [j(p1,p2), m1 j(p2) - m2 j(p1)]] with time appended last in the orientation.
  auto g = minkowski(-1);
  auto cross = [](const Eigen::Vector3d& u) {
    Eigen::Matrix3d m;
    m << 0, -u(2), u(1), u(2), 0, -u(0), -u(1), u(0), 0;
    return m;
  };
  Sampler rng(14);
  for (int n = 0; n < 50; ++n) {
    Vec<4> a = rng.vec<4>(), b = rng.vec<4>();
    Eigen::Vector3d p1 = a.tail<3>(), p2 = b.tail<3>();
    Mat<4> expect = Mat<4>::Zero();
    expect.block<1, 3>(0, 1) = p1.cross(p2).transpose();
    expect.block<3, 1>(1, 0) = p1.cross(p2);
    expect.block<3, 3>(1, 1) = a(0) * cross(p2) - b(0) * cross(p1);
    EXPECT_LT((vector_product_map<4>({a, b}, g) - expect).cwiseAbs().maxCoeff(), 1e-13);
  }
  // m1 = m2 = 0, p1 = e_x, p2 = e_y: only the (t, z) pair is coupled
  Mat<4> m = vector_product_map<4>({Vec<4>::Unit(1), Vec<4>::Unit(2)}, g);
  Mat<4> expect = Mat<4>::Zero();
  expect(0, 3) = expect(3, 0) = 1;
  EXPECT_EQ(m, expect);
  EXPECT_EQ(vector_product_map<4>({Vec<4>::Unit(1), Vec<4>::Unit(2)}, minkowski()), -expect);
}

TEST(VectorProductRecursive, ZeroLastComponents) {
  Sampler rng(8);
  auto g = minkowski();
  std::vector<Vec<5>> vs(4);
  std::vector<Vec<4>> up(4);
  for (int k = 0; k < 4; ++k) {
    up[k] = rng.vec<4>();
    vs[k] << up[k], 0.0;
  }
  Vec<5> j = vector_product_recursive<4>(vs, g, -1.0);
  EXPECT_LT(j.head<4>().norm(), 1e-15);
  Mat<4> cols;
  for (int k = 0; k < 4; ++k) cols.col(k) = up[k];
  EXPECT_NEAR(std::abs(j(4)), std::abs(cols.determinant()), 1e-14);
}

TEST(VectorProductRecursive, MatchesDirect) {
  Sampler rng(9);
  for (int n = 0; n < 100; ++n) {
    auto g3 = euclidean<3>(n % 2 ? 1 : -1);
    Mat<4> d = Vec<4>(1, 1, 1, -1).asDiagonal();
    std::vector<Vec<4>> vs = {rng.vec<4>(), rng.vec<4>(), rng.vec<4>()};
    Metric<4> g4(d, g3.orientation());
    EXPECT_LT((vector_product_recursive<3>(vs, g3, -1.0) - vector_product(vs, g4)).cwiseAbs().maxCoeff(), 1e-12);
  }
  for (double w : {1.0, 0.5, 0.1}) {
    for (int n = 0; n < 100; ++n) {
      std::vector<Vec<5>> vs = {rng.vec<5>(), rng.vec<5>(), rng.vec<5>(), rng.vec<5>()};
      EXPECT_LT((vector_product_recursive<4>(vs, minkowski(), -w * w) - vector_product(vs, omega_metric(w)))
                    .cwiseAbs()
                    .maxCoeff(),
                1e-12);
    }
  }
}

TEST(Hodge, DoubleHodgeSignLaw) {
  Sampler rng(10);
  auto check = [&](auto tag, int negatives) {
    constexpr int N = decltype(tag)::value;
    auto g = random_metric<N>(rng, negatives);
    for (int q = 0; q <= N; ++q) {
      auto a = KForm<N>::antisymmetrize(q, random_dense<N>(rng, q));
      auto twice = hodge(hodge(a, g), g);
      const int s = double_hodge_sign(N, q, g.positive());
      EXPECT_LT(twice.max_abs_diff(a * s), 1e-12 * std::max(1.0, a.max_abs())) << "n=" << N << " q=" << q;
    }
  };
  for (int rep = 0; rep < 10; ++rep) {
    for (int neg = 0; neg <= 3; ++neg) check(std::integral_constant<int, 3>{}, neg);
    for (int neg = 0; neg <= 4; ++neg) check(std::integral_constant<int, 4>{}, neg);
    for (int neg = 0; neg <= 5; ++neg) check(std::integral_constant<int, 5>{}, neg);
  }
  EXPECT_EQ(double_hodge_sign(4, 2, 1), -1);
}

TEST(Hodge, MinkowskiTwoFormsSquareToMinusOne) {
  Sampler rng(11);
  auto g = minkowski();
  for (int n = 0; n < 100; ++n) {
    auto a = KForm<4>::antisymmetrize(2, random_dense<4>(rng, 2));
    EXPECT_LT(hodge(hodge(a, g), g).max_abs_diff(a * -1.0), 1e-13);
  }
}

TEST(Hodge, BivectorDualIsVectorProductMap) {
  Sampler rng(12);
  for (int orient : {1, -1}) {
    auto g = minkowski(orient);
    for (int n = 0; n < 200; ++n) {
      Vec<4> v1 = rng.vec<4>(), v2 = rng.vec<4>();
      Mat<4> lhs = hodge_map(bivector_map(v1, v2, g), g);
      Mat<4> rhs = vector_product_map<4>({v1, v2}, g);
      EXPECT_LT((lhs - rhs).cwiseAbs().maxCoeff(), 1e-12);
      // *J(V1, V2) = (-1)^(n-p) (V1 V2* - V2 V1*)
      EXPECT_LT((hodge_map(rhs, g) + bivector_map(v1, v2, g)).cwiseAbs().maxCoeff(), 1e-12);
    }
  }
}

TEST(Hodge, VolumeAndUnit) {
  auto g = minkowski();
  KForm<4> one(0);
  one = KForm<4>::from_dense(0, {1.0});
  EXPECT_LT(hodge(one, g).max_abs_diff(volume_form(g)), 1e-15);
  // *vol = (-1)^(n-p)
  EXPECT_DOUBLE_EQ(hodge(volume_form(g), g).comps()[0], -1.0);
  EXPECT_DOUBLE_EQ(hodge(volume_form(euclidean<3>()), euclidean<3>()).comps()[0], 1.0);
  EXPECT_NEAR(hodge(volume_form(omega_metric(0.2)), omega_metric(0.2)).comps()[0], 1.0, 1e-15);
}

TEST(Hodge, WedgeOfCovectorsDualsToPartialVolume) {
  // *(V1* ^ ... ^ V_{n-2}*) = -vol(V1, ..., V_{n-2}) in Lorentzian 4D.
  Sampler rng(13);
  auto g = minkowski();
  for (int n = 0; n < 50; ++n) {
    Vec<4> v1 = rng.vec<4>(), v2 = rng.vec<4>();
    auto lhs = hodge(wedge<4>({g.lower(v1), g.lower(v2)}), g);
    auto rhs = partial_volume<4>({v1, v2}, g) * -1.0;
    EXPECT_LT(lhs.max_abs_diff(rhs), 1e-13);
  }
}

TEST(Hodge, SemiMetricRejected) {
  EXPECT_THROW(hodge(KForm<5>(2), g0_semimetric()), validation_error);
  EXPECT_THROW(omega_metric(0.0), validation_error);
}
