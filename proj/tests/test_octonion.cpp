#include "acx/octonion.hpp"
#include "acx/sampling.hpp"

#include <gtest/gtest.h>

#include <vector>

using namespace acx;

namespace {

using Vec = std::vector<double>;

// Recursive Cayley–Dickson doubling on plain coefficient vectors, used as an
// oracle for the hand-unrolled product.
Vec cd_conj(const Vec& x) {
  Vec r(x.size());
  r[0] = x[0];
  for (std::size_t i = 1; i < x.size(); ++i) r[i] = -x[i];
  return r;
}

Vec cd_mul(const Vec& x, const Vec& y) {
  if (x.size() == 1) return {x[0] * y[0]};
  const std::size_t h = x.size() / 2;
  const Vec a(x.begin(), x.begin() + h), b(x.begin() + h, x.end());
  const Vec c(y.begin(), y.begin() + h), d(y.begin() + h, y.end());
  const Vec ac = cd_mul(a, c), db = cd_mul(cd_conj(d), b), da = cd_mul(d, a), bc = cd_mul(b, cd_conj(c));
  Vec r(x.size());
  for (std::size_t i = 0; i < h; ++i) {
    r[i] = ac[i] - db[i];
    r[h + i] = da[i] + bc[i];
  }
  return r;
}

Vec coeffs(const Octonion& o) {
  Vec v(8);
  for (int i = 0; i < 8; ++i) v[i] = o[i];
  return v;
}

Octonion random_imaginary_unit(Rng& rng) {
  RVector v = random_rmatrix(rng, 8, 1).col(0);
  v(0) = 0.0;
  return Octonion::from_vector(v / v.norm());
}

}  // namespace

TEST(Octonion, ProductMatchesRecursiveDoubling) {
  Rng rng(1);
  for (int t = 0; t < 50; ++t) {
    const Octonion a = Octonion::from_vector(random_rmatrix(rng, 8, 1).col(0));
    const Octonion b = Octonion::from_vector(random_rmatrix(rng, 8, 1).col(0));
    const Vec want = cd_mul(coeffs(a), coeffs(b));
    const Octonion got = a * b;
    for (int i = 0; i < 8; ++i) EXPECT_NEAR(got[i], want[i], 1e-12);
  }
}

TEST(Octonion, UnitTable) {
  for (int i = 1; i < 8; ++i) {
    const Octonion ei = Octonion::unit(i);
    EXPECT_LT((ei * ei + Octonion::unit(0)).norm(), 1e-15);
    for (int j = 1; j < 8; ++j) {
      if (i == j) continue;
      const Octonion p = ei * Octonion::unit(j);
      EXPECT_LT((p + Octonion::unit(j) * ei).norm(), 1e-15);
      // The product of two distinct imaginary units is ± a third unit.
      int nonzero = 0;
      for (int c = 0; c < 8; ++c) nonzero += std::abs(p[c]) > 0.5;
      EXPECT_EQ(nonzero, 1);
      EXPECT_EQ(p[0], 0.0);
    }
  }
}

TEST(Octonion, NormIsMultiplicativeAndConjugationReverses) {
  Rng rng(2);
  for (int t = 0; t < 50; ++t) {
    const Octonion a = Octonion::from_vector(random_rmatrix(rng, 8, 1).col(0));
    const Octonion b = Octonion::from_vector(random_rmatrix(rng, 8, 1).col(0));
    EXPECT_NEAR((a * b).norm(), a.norm() * b.norm(), 1e-12 * (1 + a.norm() * b.norm()));
    EXPECT_LT(((a * b).conj() - b.conj() * a.conj()).norm(), 1e-12);
    EXPECT_NEAR(inner(a, b), a.vec().dot(b.vec()), 1e-12);
  }
}

TEST(Octonion, AlternativeButNotAssociative) {
  Rng rng(3);
  for (int t = 0; t < 30; ++t) {
    const Octonion a = Octonion::from_vector(random_rmatrix(rng, 8, 1).col(0));
    const Octonion b = Octonion::from_vector(random_rmatrix(rng, 8, 1).col(0));
    const Octonion c = Octonion::from_vector(random_rmatrix(rng, 8, 1).col(0));
    EXPECT_LT(associator(a, a, b).norm(), 1e-11);
    EXPECT_LT(associator(a, b, b).norm(), 1e-11);
    // Moufang: (a b a) c = a (b (a c)).
    EXPECT_LT((((a * b) * a) * c - a * (b * (a * c))).norm(), 1e-10);
  }
  EXPECT_GT(associator(Octonion::unit(1), Octonion::unit(2), Octonion::unit(4)).norm(), 1.0);
}

TEST(AlmostComplex, SquaresToMinusOneAndStaysTangent) {
  Rng rng(4);
  for (int t = 0; t < 30; ++t) {
    const Octonion u = random_imaginary_unit(rng);
    const Octonion z = project_tangent(u, Octonion::from_vector(random_rmatrix(rng, 8, 1).col(0)));
    const Octonion jz = J_O(u, z);
    EXPECT_TRUE(is_tangent(u, jz));
    EXPECT_LT((J_O(u, jz) + z).norm(), 1e-12 * (1 + z.norm()));
    EXPECT_NEAR(jz.norm(), z.norm(), 1e-12);
  }
}

TEST(AlmostComplex, RejectsBadInput) {
  const Octonion u = Octonion::unit(1);
  EXPECT_THROW(J_O(Octonion::unit(0), Octonion::unit(2)), std::invalid_argument);
  EXPECT_THROW(J_O(u, u), std::invalid_argument);
  EXPECT_THROW(J_O(u, Octonion::unit(0)), std::invalid_argument);
  EXPECT_THROW(nijenhuis(u, Octonion::unit(2), u), std::invalid_argument);
}

TEST(Nijenhuis, NonzeroOnUnits) {
  const Octonion n = nijenhuis(Octonion::unit(1), Octonion::unit(2), Octonion::unit(4));
  EXPECT_GT(n.norm(), 0.5);
  // Read off the associator form: N = [ζ,η,u] − [η,ζ,u] = 2[ζ,η,u].
  EXPECT_LT((n + 2.0 * associator(Octonion::unit(2), Octonion::unit(4), Octonion::unit(1))).norm(), 1e-14);
}

TEST(Nijenhuis, TensorialIdentities) {
  Rng rng(5);
  for (int t = 0; t < 30; ++t) {
    const Octonion u = random_imaginary_unit(rng);
    auto tangent = [&] { return project_tangent(u, Octonion::from_vector(random_rmatrix(rng, 8, 1).col(0))); };
    const Octonion z = tangent(), e = tangent(), e2 = tangent();
    const Octonion nz = nijenhuis(u, z, e);
    EXPECT_LT((nz + nijenhuis(u, e, z)).norm(), 1e-12);
    EXPECT_LT(nijenhuis(u, z, z).norm(), 1e-12);
    EXPECT_TRUE(is_tangent(u, nz, 1e-10));
    // Anti-linear in each slot with respect to J.
    EXPECT_LT((nijenhuis(u, J_O(u, z), e) + J_O(u, nz)).norm(), 1e-10);
    EXPECT_LT((nijenhuis(u, z, 2.5 * e + e2) - 2.5 * nz - nijenhuis(u, z, e2)).norm(), 1e-10);
  }
}
