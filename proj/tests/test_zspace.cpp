#include "acx/sampling.hpp"
#include "acx/zspace.hpp"

#include <gtest/gtest.h>

using namespace acx;

namespace {

ZPoint off_center_point(Rng& rng, int n, int k) {
  return {random_cvector(rng, 2 * k), chart_decode(random_chart_coords(rng, n, k, 0.4), standard_flag(n, k))};
}

// Independent oracle: extend ζ, η to sections of D with constant bottom and z
// components, X = (A(Z) a_b, a_b; a_z). Their bracket has top part
// dA(a_z) b_b − dA(b_z) a_b and vanishing bottom, so it is its own class.
CVector bracket_by_differences(const ZPoint& w, const TangentVec& a, const TangentVec& b) {
  const int n = w.flag.n, k = w.flag.k;
  const CVector z = chart_coordinates(w, Chart::standard(n, k)).z.flatten();
  const double h = 1e-5;
  auto A = [&](const CVector& dz) { return delta_graph(ChartCoords::unflatten(n, k, z + dz)); };
  auto dA = [&](const CVector& v) -> CMatrix {
    // fourth-order central stencil
    return (-A(2 * h * v) + 8.0 * A(h * v) - 8.0 * A(-h * v) + A(-2 * h * v)) / (12.0 * h);
  };
  return dA(a.z_part) * b.x_part.tail(2 * k - n) - dA(b.z_part) * a.x_part.tail(2 * k - n);
}

TangentVec random_in_d(Rng& rng, const ZPoint& w, const Chart& c) {
  const CMatrix fm = frame_matrix(distribution_frame(w, c));
  return TangentVec::unflatten(c.k, fm * random_cvector(rng, fm.cols()));
}

}  // namespace

TEST(Dims, KnownValues) {
  EXPECT_EQ(dim_N(1, 1), 4);
  EXPECT_EQ(dim_N(3, 4), 46);
  EXPECT_EQ(dim_N(2, 3), 28);
  for (int k = 1; k <= 6; ++k)
    for (int n = 1; n <= k; ++n) {
      EXPECT_EQ(dim_N(n, k) % 2, 0);
      EXPECT_EQ(dim_N(n, k), 2 * k + ChartCoords::zero(n, k).size());
    }
  EXPECT_THROW(dim_N(2, 1), GeometryError);
}

TEST(Distribution, FrameHasCorankN) {
  Rng rng(1);
  for (auto [n, k] : {std::pair{1, 1}, {1, 3}, {2, 3}, {3, 4}}) {
    const ZPoint w = off_center_point(rng, n, k);
    const CMatrix fm = frame_matrix(distribution_frame(w, Chart::standard(n, k)));
    EXPECT_EQ(fm.rows(), dim_N(n, k));
    EXPECT_EQ(numerical_rank(fm), dim_N(n, k) - n);
  }
}

TEST(Distribution, GraphContainsSPrimeAndSigmaDoublePrime) {
  Rng rng(2);
  const ZPoint w = off_center_point(rng, 2, 3);
  const CMatrix a = delta_graph(chart_coordinates(w, Chart::standard(2, 3)).z);
  const CSubspace d = subspace_sum(w.flag.sp, w.flag.sigpp);
  for (Index j = 0; j < d.dim(); ++j) EXPECT_LT(quotient_class(a, d.basis().col(j)).norm(), 1e-10);
}

TEST(Distribution, NonMemberRejected) {
  const Chart c = Chart::standard(2, 3);
  const ZPoint w{CVector::Zero(6), standard_flag(2, 3)};
  TangentVec v = TangentVec::zero(2, 3);
  v.x_part(0) = 1.0;
  EXPECT_THROW(torsion_at(w, v, v, c), GeometryError);
}

TEST(Torsion, MinimalCaseFrameValue) {
  // (n,k) = (1,1): ∂/∂x_2 against ∂/∂z_{12} gives −1.
  TangentVec x = TangentVec::zero(1, 1), y = TangentVec::zero(1, 1);
  x.x_part(1) = 1.0;
  y.z_part(*flat_index(1, 1, 1, 2)) = 1.0;
  EXPECT_NEAR(std::abs(torsion_central(1, 1, x, y).c(0) - cplx(-1.0)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(torsion_central(1, 1, y, x).c(0) - cplx(1.0)), 0.0, 1e-15);
}

TEST(Torsion, CentralFormulaMatchesBracketOracle) {
  Rng rng(3);
  for (auto [n, k] : {std::pair{1, 2}, {2, 3}, {3, 4}}) {
    const ZPoint c{CVector::Zero(2 * k), standard_flag(n, k)};
    for (int t = 0; t < 50; ++t) {
      const TangentVec a = random_in_d(rng, c, Chart::standard(n, k)), b = random_in_d(rng, c, Chart::standard(n, k));
      EXPECT_LT((torsion_central(n, k, a, b).c - torsion_bracket_oracle(n, k, a, b).c).norm(), 1e-12);
    }
  }
}

TEST(Torsion, SkewAndBilinear) {
  Rng rng(4);
  const ZPoint w = off_center_point(rng, 3, 4);
  const Chart c = Chart::standard(3, 4);
  const TangentVec a = random_in_d(rng, w, c), b = random_in_d(rng, w, c), e = random_in_d(rng, w, c);
  const cplx s(0.3, -1.2);
  EXPECT_LT((torsion_at(w, a, b, c).c + torsion_at(w, b, a, c).c).norm(), 1e-10);
  EXPECT_LT(torsion_at(w, a, a, c).c.norm(), 1e-10);
  EXPECT_LT((torsion_at(w, s * a + e, b, c).c - s * torsion_at(w, a, b, c).c - torsion_at(w, e, b, c).c).norm(), 1e-9);
}

TEST(Torsion, OffCenterMatchesFiniteDifferenceBracket) {
  Rng rng(5);
  for (auto [n, k] : {std::pair{1, 2}, {2, 3}, {3, 4}}) {
    for (int t = 0; t < 5; ++t) {
      const ZPoint w = off_center_point(rng, n, k);
      const Chart c = Chart::standard(n, k);
      const TangentVec a = random_in_d(rng, w, c), b = random_in_d(rng, w, c);
      const CVector oracle = bracket_by_differences(w, a, b);
      EXPECT_LT((torsion_at(w, a, b, c).c - oracle).norm(), 1e-7 * std::max(1.0, oracle.norm()));
    }
  }
}

TEST(Torsion, EquivariantUnderAffineMaps) {
  Rng rng(6);
  const ZPoint w = off_center_point(rng, 2, 4);
  const Chart c = Chart::standard(2, 4);
  const TangentVec a = random_in_d(rng, w, c), b = random_in_d(rng, w, c);
  const CMatrix g = random_gl(rng, 8, 1.0);
  const CVector shift = random_cvector(rng, 8);
  const CVector before = torsion_at(w, a, b, c).c;
  const CVector after = torsion_at(affine_act(g, shift, w), a, b, c.transported(g, shift)).c;
  EXPECT_LT((after - before).norm(), 1e-9 * std::max(1.0, before.norm()));
}

TEST(Transport, RoundTripIsIdentity) {
  Rng rng(7);
  const ZPoint w = off_center_point(rng, 2, 3);
  const Chart s = Chart::standard(2, 3), cw = Chart::centered_at(w);
  const TangentVec v = TangentVec::unflatten(3, random_cvector(rng, dim_N(2, 3)));
  const TangentVec back = transport(transport(v, w, s, cw), w, cw, s);
  EXPECT_LT((back.flatten() - v.flatten()).norm(), 1e-9);
}

TEST(Transport, MatchesDifferenceQuotientOfChartChange) {
  Rng rng(8);
  const ZPoint w = off_center_point(rng, 2, 3);
  const Chart s = Chart::standard(2, 3), cw = Chart::centered_at(w);
  const TangentVec v = TangentVec::unflatten(3, random_cvector(rng, dim_N(2, 3)));
  const ChartPoint p = chart_coordinates(w, s);
  const double h = 1e-6;
  auto moved = [&](double t) {
    const ChartPoint q{p.x + t * v.x_part, ChartCoords::unflatten(2, 3, p.z.flatten() + t * v.z_part)};
    const ChartPoint r = chart_coordinates(chart_point(q, s), cw);
    CVector out(dim_N(2, 3));
    out << r.x, r.z.flatten();
    return out;
  };
  const CVector fd = (moved(h) - moved(-h)) / (2 * h);
  EXPECT_LT((transport(v, w, s, cw).flatten() - fd).norm(), 1e-6 * std::max(1.0, fd.norm()));
}

TEST(Chart, CenteredChartPutsPointAtOrigin) {
  Rng rng(9);
  const ZPoint w = random_zpoint(rng, 3, 4);
  const ChartPoint p = chart_coordinates(w, Chart::centered_at(w));
  EXPECT_LT(p.x.norm(), 1e-12);
  EXPECT_LT(p.z.norm(), 1e-10);
  EXPECT_TRUE(zpoints_equal(chart_point(p, Chart::centered_at(w)), w));
}

TEST(Gro, InjectiveProjectionAndIsotropy) {
  const int n = 2, k = 3;
  const ZPoint w{CVector::Zero(6), standard_flag(n, k)};
  const Chart c = Chart::standard(n, k);
  // V spanned by ∂/∂x_3, ∂/∂x_4: inside D, injective, θ vanishes (no z-part).
  CMatrix b = CMatrix::Zero(dim_N(n, k), 2);
  b(2, 0) = b(3, 1) = 1.0;
  const CSubspace v = span(b);
  EXPECT_TRUE(in_gro(w, v, c));
  EXPECT_TRUE(is_isotropic(w, v, c));
  // Tilting by a z-component pairing with x_3 breaks isotropy.
  b(2 * k + *flat_index(n, k, 1, 3), 1) = 1.0;
  EXPECT_FALSE(is_isotropic(w, span(b), c));
  // Pure z-directions are not injective under dπ.
  CMatrix zb = CMatrix::Zero(dim_N(n, k), 2);
  zb(2 * k, 0) = zb(2 * k + 1, 1) = 1.0;
  EXPECT_FALSE(in_gro(w, span(zb), c));
  EXPECT_THROW(in_gro(w, span(b.leftCols(1)), c), GeometryError);
}

TEST(Gro, IsotropicGraphsAreKernelOfTheta) {
  Rng rng(10);
  const int n = 2, k = 3;
  const ZPoint w = random_zpoint(rng, n, k);
  CMatrix v0 = CMatrix::Zero(2 * k, n);
  v0.block(n, 0, n, n) = CMatrix::Identity(n, n);
  const CSubspace v = span(transitivity_witness(w.flag) * v0);
  const ThetaSetup s = theta_setup(w, v);
  const CMatrix t = theta_matrix(s);
  Eigen::FullPivLU<CMatrix> lu(t);
  const CMatrix ker = lu.kernel();
  ASSERT_GT(ker.cols(), 0);
  const Index m = dim_N(n, k) - 2 * k;
  const CVector fk = ker * random_cvector(rng, ker.cols());
  const CMatrix f = Eigen::Map<const CMatrix>(fk.data(), m, n).transpose();
  const Chart cw = Chart::centered_at(w);
  EXPECT_TRUE(is_isotropic(w, theta_graph(s, f), cw));
  const CMatrix g = random_cmatrix(rng, n, m);
  EXPECT_FALSE(is_isotropic(w, theta_graph(s, g), cw));
}

TEST(Theta, RankAndKernel) {
  Rng rng(11);
  for (auto [n, k] : {std::pair{1, 1}, {2, 3}, {3, 4}}) {
    const ZPoint w = random_zpoint(rng, n, k);
    CMatrix v0 = CMatrix::Zero(2 * k, n);
    v0.block(n, 0, n, n) = CMatrix::Identity(n, n);
    const CSubspace v = span(transitivity_witness(w.flag) * v0);
    const int m = dim_N(n, k) - 2 * k, r = n * (n * (n - 1) / 2);
    if (r > 0) EXPECT_EQ(numerical_rank(theta_matrix(w, v)), r);
    EXPECT_EQ(theta_kernel_dim(w, v), n * m - r);
  }
}

TEST(Theta, RejectsSubspaceOutsideDelta) {
  const ZPoint w{CVector::Zero(6), standard_flag(2, 3)};
  CMatrix b = CMatrix::Zero(6, 2);
  b(0, 0) = b(1, 1) = 1.0;
  EXPECT_THROW(theta_setup(w, span(b)), GeometryError);
}

TEST(Fiber, ActionLaws) {
  Rng rng(12);
  const int n = 2, k = 3;
  const CSubspace s = lift_x(span(random_cmatrix(rng, 2 * k, n)), n, k), t = z_block(n, k);
  const Index m = t.dim();
  const LinMap g(s, t, random_cmatrix(rng, m, n)), f1(s, t, random_cmatrix(rng, m, n)),
      f2(s, t, random_cmatrix(rng, m, n));
  const CSubspace gg = graph_of(g);
  EXPECT_LT(projector_distance(fiber_translate(LinMap::zero(s, t), gg, n, k), gg), 1e-10);
  EXPECT_LT(projector_distance(fiber_translate(f1, fiber_translate(f2, gg, n, k), n, k),
                               fiber_translate(f1 + f2, gg, n, k)),
            1e-10);
  const LinMap diff = fiber_decode(fiber_translate(f1, gg, n, k), s, n, k) - fiber_decode(gg, s, n, k);
  EXPECT_LT((diff.matrix - f1.matrix).norm(), 1e-10);
}

TEST(Fiber, RejectsGraphOverOtherBase) {
  Rng rng(13);
  const int n = 1, k = 2;
  const CSubspace s = lift_x(span(random_cmatrix(rng, 4, 1)), n, k), s2 = lift_x(span(random_cmatrix(rng, 4, 1)), n, k);
  const CSubspace t = z_block(n, k);
  const LinMap f(s, t, random_cmatrix(rng, t.dim(), 1));
  EXPECT_THROW(fiber_translate(f, graph_of(LinMap::zero(s2, t)), n, k), GeometryError);
}
