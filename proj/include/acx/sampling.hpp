#pragma once

// Seeded random inputs for tests and verification suites.

#include "acx/zspace.hpp"

#include <cstdint>
#include <random>

namespace acx {

using Rng = std::mt19937_64;

inline double gaussian(Rng& rng) { return std::normal_distribution<double>(0.0, 1.0)(rng); }

inline RMatrix random_rmatrix(Rng& rng, Index r, Index c, double scale = 1.0) {
  RMatrix m(r, c);
  for (Index j = 0; j < c; ++j)
    for (Index i = 0; i < r; ++i) m(i, j) = scale * gaussian(rng);
  return m;
}

inline CMatrix random_cmatrix(Rng& rng, Index r, Index c, double scale = 1.0) {
  CMatrix m(r, c);
  for (Index j = 0; j < c; ++j)
    for (Index i = 0; i < r; ++i) {
      const double re = gaussian(rng), im = gaussian(rng);
      m(i, j) = scale * cplx(re, im) / std::sqrt(2.0);
    }
  return m;
}

inline CVector random_cvector(Rng& rng, Index d, double scale = 1.0) { return random_cmatrix(rng, d, 1, scale).col(0); }

/// Identity plus a Gaussian perturbation: invertible and well conditioned.
inline CMatrix random_gl(Rng& rng, Index d, double spread = 0.5) {
  for (;;) {
    CMatrix b = CMatrix::Identity(d, d) + random_cmatrix(rng, d, d, spread / std::sqrt(double(d)));
    if (condition_number(b) < 1e3) return b;
  }
}

inline ChartCoords random_chart_coords(Rng& rng, int n, int k, double scale = 0.5) {
  return ChartCoords::unflatten(n, k, random_cvector(rng, dim_N(n, k) - 2 * k, scale));
}

inline Flag random_flag(Rng& rng, int n, int k) { return gl_act(random_gl(rng, 2 * k, 1.0), standard_flag(n, k)); }

inline ZPoint random_zpoint(Rng& rng, int n, int k) { return {random_cvector(rng, 2 * k), random_flag(rng, n, k)}; }

/// Random element of the stabiliser of f₀ (block pattern filled at random).
inline CMatrix random_stabilizer(Rng& rng, int n, int k) {
  CMatrix b = CMatrix::Zero(2 * k, 2 * k);
  for (int off : {0, k}) {
    CMatrix blk = random_gl(rng, k);
    blk.block(0, n, n, k - n).setZero();  // S-columns stay inside S
    b.block(off, off, k, k) = blk;
  }
  return b;
}

/// Random vector of D at w in chart c.
inline TangentVec random_d_vector(Rng& rng, const ZPoint& w, const Chart& c) {
  const CMatrix f = frame_matrix(distribution_frame(w, c));
  return TangentVec::unflatten(c.k, f * random_cvector(rng, f.cols()));
}

/// Deterministic 64-bit seed derived from a base seed and a case index.
inline std::uint64_t case_seed(std::uint64_t base, std::uint64_t index) {
  std::uint64_t z = base + 0x9e3779b97f4a7c15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace acx
