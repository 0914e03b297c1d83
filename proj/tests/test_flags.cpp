#include "acx/flags.hpp"
#include "acx/sampling.hpp"

#include <gtest/gtest.h>

using namespace acx;

namespace {

RMatrix block_rotations(int blocks) {
  RMatrix j = RMatrix::Zero(2 * blocks, 2 * blocks);
  for (int b = 0; b < blocks; ++b) {
    j(2 * b + 1, 2 * b) = 1;
    j(2 * b, 2 * b + 1) = -1;
  }
  return j;
}

CMatrix unit_cols(Index d, std::initializer_list<int> one_based) {
  CMatrix m = CMatrix::Zero(d, static_cast<Index>(one_based.size()));
  Index c = 0;
  for (int i : one_based) m(i - 1, c++) = 1.0;
  return m;
}

}  // namespace

TEST(StandardFlag, MinimalCase) {
  const Flag f = standard_flag(1, 1);
  EXPECT_EQ(f.sp.dim(), 0);
  EXPECT_EQ(f.spp.dim(), 0);
  EXPECT_TRUE(subspace_eq(f.sigp, span(unit_cols(2, {1}))));
  EXPECT_TRUE(subspace_eq(f.sigpp, span(unit_cols(2, {2}))));
}

TEST(StandardFlag, DimensionsForThreeFour) {
  const Flag f = standard_flag(3, 4);
  EXPECT_EQ(f.sp.dim(), 1);
  EXPECT_EQ(f.spp.dim(), 1);
  EXPECT_EQ(f.sigp.dim(), 4);
  EXPECT_EQ(f.sigpp.dim(), 4);
  EXPECT_EQ(f.sigp.ambient_dim(), 8);
  EXPECT_TRUE(subspace_eq(f.sp, span(unit_cols(8, {4}))));
  EXPECT_TRUE(subspace_eq(f.spp, span(unit_cols(8, {8}))));
}

TEST(StandardFlag, InvariantsAndRange) {
  for (int k = 1; k <= 5; ++k)
    for (int n = 1; n <= k; ++n) EXPECT_FALSE(flag_violation(standard_flag(n, k)).has_value());
  EXPECT_THROW(standard_flag(3, 2), GeometryError);
  EXPECT_THROW(standard_flag(0, 2), GeometryError);
}

TEST(FlagFromAcs, NoNormalFactor) {
  const RMatrix jx = block_rotations(2);
  const Flag f = flag_from_acs(jx, RMatrix());
  EXPECT_EQ(f.sp.dim(), 0);
  EXPECT_TRUE(subspace_eq(f.sigp, eig_pm_i(jx).plus));
}

TEST(FlagFromAcs, BlockRotationsExplicitEigenvectors) {
  // Σ' = span(e_{2j-1} − i e_{2j}); S' the part coming from the normal blocks.
  const int n = 2, k = 3;
  const Flag f = flag_from_acs(block_rotations(n), block_rotations(k - n));
  CMatrix plus = CMatrix::Zero(2 * k, k);
  for (int j = 0; j < k; ++j) {
    plus(2 * j, j) = 1.0;
    plus(2 * j + 1, j) = -kI;
  }
  EXPECT_TRUE(subspace_eq(f.sigp, span(plus)));
  EXPECT_TRUE(subspace_eq(f.sigpp, span(plus.conjugate())));
  EXPECT_TRUE(subspace_eq(f.sp, span(plus.rightCols(k - n))));
  EXPECT_TRUE(subspace_eq(f.spp, span(plus.rightCols(k - n).conjugate())));
  // Up to the linear change of basis sending e_j to these eigenvectors it is f₀.
  CMatrix b(2 * k, 2 * k);
  b << plus, plus.conjugate();
  EXPECT_TRUE(flags_equal(gl_act(b, standard_flag(n, k)), f));
}

TEST(FlagFromAcs, ConjugatedNormalStructure) {
  Rng rng(4);
  const RMatrix g = RMatrix::Identity(4, 4) + 0.3 * random_rmatrix(rng, 4, 4);
  const RMatrix jn = g * block_rotations(2) * g.inverse();
  const Flag f = flag_from_acs(block_rotations(1), jn);
  EXPECT_FALSE(flag_violation(f).has_value());
  EXPECT_EQ(f.sp.dim(), 2);
}

TEST(FlagFromAcs, RejectsNonAcs) {
  EXPECT_THROW(flag_from_acs(RMatrix::Identity(2, 2), RMatrix()), GeometryError);
  EXPECT_THROW(flag_from_acs(block_rotations(1), RMatrix::Identity(2, 2)), GeometryError);
}

TEST(Chart, CenterEncodesToZero) {
  Rng rng(1);
  for (int t = 0; t < 10; ++t) {
    const Flag c = random_flag(rng, 2, 3);
    EXPECT_LT(chart_encode(c, c).norm(), 1e-12);
  }
}

TEST(Chart, GraphSlopesForOneOne) {
  const Flag f0 = standard_flag(1, 1);
  const Flag f{1, 1, CSubspace::zero(2), CSubspace::zero(2), span((CMatrix(2, 1) << 1.0, 3.0).finished()),
         span((CMatrix(2, 1) << 5.0, 1.0).finished())};
  const ChartCoords z = chart_encode(f, f0);
  EXPECT_NEAR(std::abs(z.zSig1(0, 0) - 3.0), 0.0, 1e-12);
  EXPECT_NEAR(std::abs(z.zSig2(0, 0) - 5.0), 0.0, 1e-12);
}

TEST(Chart, OutsideDomainRejected) {
  const Flag f0 = standard_flag(1, 1);
  const Flag f{1, 1, CSubspace::zero(2), CSubspace::zero(2), span(unit_cols(2, {2})), span(unit_cols(2, {1}))};
  EXPECT_THROW(chart_encode(f, f0), GeometryError);
}

TEST(Chart, DecodeZeroIsCenter) {
  Rng rng(2);
  const Flag c = random_flag(rng, 3, 4);
  EXPECT_TRUE(flags_equal(chart_decode(ChartCoords::zero(3, 4), c), c));
}

TEST(Chart, SingleEntryMovesOnlySPrime) {
  const Flag f0 = standard_flag(2, 4);
  ChartCoords z = ChartCoords::zero(2, 4);
  z.zS1(1, 0) = 0.7;
  const Flag f = chart_decode(z, f0);
  EXPECT_FALSE(subspace_eq(f.sp, f0.sp));
  EXPECT_TRUE(subspace_eq(f.spp, f0.spp));
  EXPECT_TRUE(subspace_eq(f.sigp, f0.sigp));
  EXPECT_TRUE(subspace_eq(f.sigpp, f0.sigpp));
}

TEST(Chart, RoundTripAndContainment) {
  Rng rng(7);
  for (int k = 1; k <= 4; ++k)
    for (int n = 1; n <= std::min(k, 3); ++n)
      for (int t = 0; t < 5; ++t) {
        const Flag c = random_flag(rng, n, k);
        const ChartCoords z = random_chart_coords(rng, n, k);
        const Flag f = chart_decode(z, c);
        EXPECT_FALSE(flag_violation(f).has_value());
        EXPECT_LT(operator_norm(f.sp.basis() - f.sigp.projector() * f.sp.basis()), 1e-10);
        EXPECT_LT((chart_encode(f, c).flatten() - z.flatten()).norm(), 1e-10);
      }
}

TEST(Chart, IndexSetMatchesFlattening) {
  for (int k = 1; k <= 4; ++k)
    for (int n = 1; n <= k; ++n) {
      const auto idx = index_set_I(n, k);
      ASSERT_EQ(static_cast<Index>(idx.size()), ChartCoords::zero(n, k).size());
      for (std::size_t p = 0; p < idx.size(); ++p) EXPECT_EQ(*flat_index(n, k, idx[p].i, idx[p].j), Index(p));
    }
}

TEST(Chart, TransformDerivativeMatchesFiniteDifference) {
  Rng rng(8);
  const CMatrix m = random_gl(rng, 8, 0.4);
  const ChartCoords z = random_chart_coords(rng, 3, 4, 0.3), dz = random_chart_coords(rng, 3, 4);
  const double h = 1e-6;
  const CVector fd = (detail::transform_coords(m, ChartCoords::unflatten(3, 4, z.flatten() + h * dz.flatten())).flatten() -
                      detail::transform_coords(m, ChartCoords::unflatten(3, 4, z.flatten() - h * dz.flatten())).flatten()) /
                     (2 * h);
  EXPECT_LT((detail::transform_coords_derivative(m, z, dz).flatten() - fd).norm(), 1e-7 * std::max(1.0, fd.norm()));
}

TEST(Involution, IsAnInvolution) {
  Rng rng(3);
  const ZPoint p = random_zpoint(rng, 2, 3);
  EXPECT_TRUE(zpoints_equal(involution(involution(p)), p));
}

TEST(Involution, RealPointsAreFixed) {
  const Flag f = flag_from_acs(block_rotations(2), block_rotations(1));
  const ZPoint p{(CVector(6) << 1, 2, 3, 4, 5, 6).finished(), f};
  EXPECT_TRUE(is_real_point(p));
}

TEST(Involution, StandardFlagIsNotReal) {
  // conj(Σ₀') = Σ₀' since Σ₀' is spanned by real vectors, and Σ₀' ≠ Σ₀''.
  const ZPoint p{CVector::Zero(8), standard_flag(3, 4)};
  EXPECT_TRUE(subspace_eq(p.flag.sigp.conjugate(), p.flag.sigp));
  EXPECT_FALSE(is_real_point(p));
}

TEST(Involution, AntiHolomorphicInRealCenteredChart) {
  const Flag c = flag_from_acs(block_rotations(2), block_rotations(1));
  auto phi = [&](const CVector& v) {
    const Flag f = chart_decode(ChartCoords::unflatten(2, 3, v), c);
    const ZPoint q = involution(ZPoint{CVector::Zero(6), f});
    return chart_encode(q.flag, c).flatten();
  };
  Rng rng(5);
  const Index m = ChartCoords::zero(2, 3).size();
  EXPECT_LT(phi(CVector::Zero(m)).norm(), 1e-12);
  const CVector v = random_cvector(rng, m);
  const double h = 1e-6;
  const CVector d1 = (phi(h * v) - phi(-h * v)) / (2 * h);
  const CVector di = (phi(h * kI * v) - phi(-h * kI * v)) / (2 * h);
  EXPECT_LT((di + kI * d1).norm(), 1e-6 * std::max(1.0, d1.norm()));
}

TEST(GlAct, TrivialCases) {
  Rng rng(6);
  const Flag f = random_flag(rng, 2, 3);
  EXPECT_TRUE(flags_equal(gl_act(CMatrix::Identity(6, 6), f), f));
  EXPECT_TRUE(flags_equal(gl_act(cplx(2.0, -1.0) * CMatrix::Identity(6, 6), f), f));
  EXPECT_FALSE(flag_violation(gl_act(random_gl(rng, 6, 1.0), f)).has_value());
  EXPECT_THROW(gl_act(CMatrix::Zero(6, 6), f), GeometryError);
}

TEST(GlAct, IsAGroupAction) {
  Rng rng(12);
  const Flag f = random_flag(rng, 3, 4);
  for (int t = 0; t < 10; ++t) {
    const CMatrix a = random_gl(rng, 8, 1.0), b = random_gl(rng, 8, 1.0);
    EXPECT_TRUE(flags_equal(gl_act(a * b, f), gl_act(a, gl_act(b, f))));
  }
}

TEST(Witness, StandardFlagGivesIdentity) {
  for (int k = 1; k <= 4; ++k)
    for (int n = 1; n <= k; ++n) {
      const CMatrix b = transitivity_witness(standard_flag(n, k));
      EXPECT_LT((b - CMatrix::Identity(2 * k, 2 * k)).norm(), 1e-14);
    }
}

TEST(Witness, RoundTrips) {
  Rng rng(13);
  for (int t = 0; t < 30; ++t) {
    const Flag f = random_flag(rng, 3, 4);
    EXPECT_LT(flag_distance(gl_act(transitivity_witness(f), standard_flag(3, 4)), f), 1e-9);
  }
  const Flag g = flag_from_acs(block_rotations(3), block_rotations(1));
  EXPECT_LT(flag_distance(gl_act(transitivity_witness(g), standard_flag(3, 4)), g), 1e-9);
}

TEST(Stabilizer, Examples) {
  EXPECT_TRUE(stabilizer_check(CMatrix::Identity(8, 8), 3, 4));
  Rng rng(14);
  const CMatrix b = random_stabilizer(rng, 3, 4);
  EXPECT_TRUE(stabilizer_check(b, 3, 4));
  EXPECT_TRUE(fixes_standard_flag(b, 3, 4));
  CMatrix swap = CMatrix::Identity(8, 8);
  swap(0, 0) = swap(4, 4) = 0.0;
  swap(0, 4) = swap(4, 0) = 1.0;
  EXPECT_FALSE(stabilizer_check(swap, 3, 4));
  EXPECT_FALSE(fixes_standard_flag(swap, 3, 4));
  EXPECT_THROW(stabilizer_check(CMatrix::Zero(8, 8), 3, 4), GeometryError);
}

TEST(Stabilizer, AgreesWithFixedPointCriterion) {
  Rng rng(15);
  for (int t = 0; t < 100; ++t) {
    const CMatrix in = random_stabilizer(rng, 2, 4);
    EXPECT_EQ(stabilizer_check(in, 2, 4), fixes_standard_flag(in, 2, 4));
    CMatrix near = in;
    near(static_cast<Index>(t % 2), 2 + static_cast<Index>(t % 2)) += 0.25;  // forbidden S-block entry
    EXPECT_EQ(stabilizer_check(near, 2, 4), fixes_standard_flag(near, 2, 4));
    EXPECT_FALSE(stabilizer_check(near, 2, 4));
    const CMatrix out = random_gl(rng, 8, 1.0);
    EXPECT_EQ(stabilizer_check(out, 2, 4), fixes_standard_flag(out, 2, 4));
  }
}
