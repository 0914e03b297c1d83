#pragma once

// The embedding S⁶ ⊂ R⁸ ↪ Z_3(C⁸) built from J~ = J_O(u) ⊕ J_N(u), its finite
// difference differential, ∂̄F, the lift F~ = Im ∂̄F and the comparison of the
// octonion Nijenhuis tensor with 4θ on the lift.
//
// All tangent data at F(u) are written in the chart centred at F(u); the
// distribution there is the x-coordinates n+1..2k plus every z-direction.

#include "acx/octonion.hpp"
#include "acx/zspace.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace acx {

inline constexpr int kS6n = 3;
inline constexpr int kS6k = 4;

namespace detail {

inline Octonion oct_of(const RVector& v) { return Octonion::from_vector(v); }

}  // namespace detail

/// Orthonormal frame (8×6) of T_u S⁶: e1..e7 projected off u, chosen greedily
/// by largest residual (ties to the lowest index) and orthonormalised.
inline RMatrix tangent_frame(const Octonion& u) {
  require_s6(u);
  const RVector uv = u.vec();
  RMatrix res = RMatrix::Zero(8, 7);
  for (int j = 0; j < 7; ++j) {
    res(j + 1, j) = 1.0;
    res.col(j) -= uv(j + 1) * uv;
  }
  RMatrix out(8, 6);
  for (int c = 0; c < 6; ++c) {
    Index best = 0;
    double best_norm = -1.0;
    for (Index j = 0; j < res.cols(); ++j) {
      const double nj = res.col(j).norm();
      if (nj > best_norm * (1.0 + 1e-12)) {
        best = j;
        best_norm = nj;
      }
    }
    const RVector q = res.col(best) / best_norm;
    out.col(c) = q;
    res -= q * (q.transpose() * res);
  }
  return out;
}

/// J_O(u) in the frame E: Eᵀ J E.
inline RMatrix jx_s6(const Octonion& u, const RMatrix& e) {
  RMatrix jx(6, 6);
  for (int a = 0; a < 6; ++a) jx.col(a) = e.transpose() * J_O(u, detail::oct_of(e.col(a))).vec();
  return jx;
}

/// Rotation u ↦ e0, e0 ↦ −u on span{u, e0}, in that basis.
inline RMatrix normal_acs_s6(const Octonion& u) {
  require_s6(u);
  RMatrix j(2, 2);
  j << 0.0, -1.0, 1.0, 0.0;
  return j;
}

/// J_{N⊕N} ⊕ (−J_X) on R^{2·nu} ⊕ R^{2n}, with J_{N⊕N}(ζ, η) = (−η, ζ).
inline RMatrix diagonal_JN(const RMatrix& jx, int nu_dim) {
  require_acs(jx);
  if (nu_dim < 0) throw GeometryError("diagonal_JN: negative normal rank");
  const Index m = 2 * nu_dim, d = m + jx.rows();
  RMatrix j = RMatrix::Zero(d, d);
  j.block(0, nu_dim, nu_dim, nu_dim) = -RMatrix::Identity(nu_dim, nu_dim);
  j.block(nu_dim, 0, nu_dim, nu_dim) = RMatrix::Identity(nu_dim, nu_dim);
  j.bottomRightCorner(jx.rows(), jx.cols()) = -jx;
  return j;
}

struct EmbeddingFrame {
  Octonion u;
  ZPoint zpoint;
  RMatrix e;   // 8×6 tangent frame
  RMatrix jx;  // 6×6
  RMatrix jn;  // 2×2 on (u, e0)
};

inline EmbeddingFrame embedding_frame(const Octonion& u) {
  EmbeddingFrame f{u, ZPoint(), tangent_frame(u), RMatrix(), normal_acs_s6(u)};
  f.jx = jx_s6(u, f.e);
  RMatrix r(8, 8);  // adapted orthonormal frame [E | u, e0]
  r << f.e, u.vec(), RVector::Unit(8, 0);
  const Flag adapted = flag_from_acs(f.jx, f.jn);
  f.zpoint = {u.vec().cast<cplx>(), gl_act(r.cast<cplx>(), adapted)};
  return f;
}

inline ZPoint F_s6(const Octonion& u) { return embedding_frame(u).zpoint; }

/// Columns dF(E_a), a = 1..6, in the chart centred at F(u).
struct Differential {
  EmbeddingFrame frame;
  Chart chart;
  CMatrix cols;  // N × 6
  double h;      // step actually used
};

namespace detail {

inline Octonion great_circle(const Octonion& u, const RVector& dir, double t) {
  return detail::oct_of(std::cos(t) * u.vec() + std::sin(t) * dir);
}

inline CVector chart_vector(const ZPoint& w, const Chart& c) {
  const ChartPoint p = chart_coordinates(w, c);
  CVector v(p.x.size() + p.z.size());
  v << p.x, p.z.flatten();
  return v;
}

}  // namespace detail

/// Central differences along great circles through u. A stencil leaving the
/// chart is retried once with h/10.
inline Differential dF(const Octonion& u, double h = 1e-5) {
  Differential d{embedding_frame(u), Chart::centered_at(F_s6(u)), CMatrix(), h};
  const int N = dim_N(kS6n, kS6k);
  auto attempt = [&](double step) {
    CMatrix cols(N, 6);
    for (int a = 0; a < 6; ++a) {
      const RVector dir = d.frame.e.col(a);
      const CVector plus = detail::chart_vector(F_s6(detail::great_circle(u, dir, step)), d.chart);
      const CVector minus = detail::chart_vector(F_s6(detail::great_circle(u, dir, -step)), d.chart);
      cols.col(a) = (plus - minus) / (2.0 * step);
    }
    return cols;
  };
  try {
    d.cols = attempt(h);
  } catch (const GeometryError&) {
    d.h = h / 10.0;
    try {
      d.cols = attempt(d.h);
    } catch (const GeometryError& e) {
      throw GeometryError(std::string("dF: finite-difference stencil left the chart: ") + e.what());
    }
  }
  return d;
}

/// dF(ζ) for ζ ∈ T_u S⁶ given in R⁸.
inline TangentVec apply_dF(const Differential& d, const Octonion& zeta) {
  require_tangent(d.frame.u, zeta);
  return TangentVec::unflatten(kS6k, d.cols * (d.frame.e.transpose() * zeta.vec()).cast<cplx>());
}

/// Columns ½(dF(E_a) + i·dF(J E_a)).
inline CMatrix dbar_columns(const Differential& d) {
  return 0.5 * (d.cols + kI * (d.cols * d.frame.jx.cast<cplx>()));
}

inline TangentVec dbar_F(const Differential& d, const Octonion& zeta) {
  require_tangent(d.frame.u, zeta);
  return TangentVec::unflatten(kS6k, dbar_columns(d) * (d.frame.e.transpose() * zeta.vec()).cast<cplx>());
}

/// Ambient dπ of a chart tangent vector: B·x.
inline CVector dpi(const Differential& d, const TangentVec& v) { return d.chart.frame * v.x_part; }

/// Rank cutoff for quantities carrying finite-difference noise.
inline constexpr double kFdRankTol = 1e-6;

/// F~(u) = Im ∂̄F(u) ⊂ T at F(u), in the centred chart.
inline CSubspace lift_Ftilde(const Differential& d) {
  const CMatrix cols = dbar_columns(d);
  if (numerical_rank(cols, kFdRankTol) != kS6n) throw GeometryError("degenerate lift");
  return CSubspace::span_or_zero(cols, kFdRankTol);
}

namespace detail {

inline RMatrix realify(const CMatrix& m) {
  RMatrix r(2 * m.rows(), m.cols());
  r << m.real(), m.imag();
  return r;
}

}  // namespace detail

/// Real rank of dF(T) + D at F(u) with the listed dF columns left out.
inline int transversality_rank(const Differential& d, const std::vector<int>& dropped = {}) {
  const ZPoint w = d.frame.zpoint;
  const CMatrix frame = frame_matrix(distribution_frame(w, d.chart));
  std::vector<int> keep;
  for (int a = 0; a < 6; ++a)
    if (std::find(dropped.begin(), dropped.end(), a) == dropped.end()) keep.push_back(a);
  const Index N = frame.rows();
  RMatrix m(2 * N, static_cast<Index>(keep.size()) + 2 * frame.cols());
  Index c = 0;
  for (int a : keep) m.col(c++) = detail::realify(d.cols.col(a));
  m.middleCols(c, frame.cols()) = detail::realify(frame);
  m.middleCols(c + frame.cols(), frame.cols()) = detail::realify(kI * frame);
  return numerical_rank(m, kFdRankTol);
}

inline bool transversality_check(const Differential& d) { return transversality_rank(d) == 2 * dim_N(kS6n, kS6k); }

struct FourThetaResult {
  Octonion lhs;
  Octonion rhs;
  double residual;
};

/// Compares N(u)(ζ,η) with 4θ(∂̄Fζ, ∂̄Fη) carried back to T_u S⁶ through
/// T/D ≅ dF(T S⁶) ≅ T S⁶.
inline FourThetaResult verify_4theta(const Differential& d, const Octonion& zeta, const Octonion& eta) {
  const Octonion& u = d.frame.u;
  const Octonion lhs = nijenhuis(u, zeta, eta);
  TangentVec a = dbar_F(d, zeta), b = dbar_F(d, eta);
  for (TangentVec* v : {&a, &b}) {
    if (v->x_part.head(kS6n).norm() > kFdRankTol * std::max(1.0, v->flatten().norm())) {
      throw GeometryError("∂̄F left the distribution");
    }
    v->x_part.head(kS6n).setZero();
  }
  const CVector q = torsion_central(kS6n, kS6k, a, b).c;
  // dF(E t) mod D = top rows of the x-part; solve the real 6×6 system.
  const RMatrix m = detail::realify(d.cols.topRows(kS6n));
  RVector qr(2 * kS6n);
  qr << q.real(), q.imag();
  const RVector t = m.colPivHouseholderQr().solve(qr);
  const Octonion rhs = detail::oct_of(4.0 * (d.frame.e * t));
  const double denom = std::max(lhs.norm(), 1e-12);
  return {lhs, rhs, (lhs - rhs).norm() / denom};
}

inline FourThetaResult verify_4theta(const Octonion& u, const Octonion& zeta, const Octonion& eta, double h = 1e-5) {
  return verify_4theta(dF(u, h), zeta, eta);
}

}  // namespace acx
