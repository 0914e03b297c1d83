#pragma once

// Flag pairs (S', S'', Σ', Σ'') in C^{2k}, graph coordinates around a centre
// flag, the GL_{2k} action, its stabiliser pattern and the real structure.

#include "acx/cxlinalg.hpp"

#include <optional>
#include <string>
#include <vector>

namespace acx {

struct Flag {
  int n = 0;
  int k = 0;
  CSubspace sp, spp, sigp, sigpp;  // S', S'', Σ', Σ''
};

/// Point of the total space: base point y ∈ C^{2k} and a flag over it.
struct ZPoint {
  CVector y;
  Flag flag;
};

inline void check_nk(int n, int k) {
  if (n < 1 || k < n) {
    throw GeometryError("need k >= n >= 1 (got n=" + std::to_string(n) + ", k=" + std::to_string(k) + ")");
  }
}

/// Returns a description of the first violated invariant, if any.
inline std::optional<std::string> flag_violation(const Flag& f, const Tolerances& tol = default_tolerances()) {
  const Index d = 2 * f.k;
  if (f.n < 1 || f.k < f.n) return "bad (n,k)";
  for (const CSubspace* s : {&f.sp, &f.spp, &f.sigp, &f.sigpp}) {
    if (s->ambient_dim() != d) return "ambient dimension is not 2k";
  }
  if (f.sp.dim() != f.k - f.n || f.spp.dim() != f.k - f.n) return "dim S', S'' must be k-n";
  if (f.sigp.dim() != f.k || f.sigpp.dim() != f.k) return "dim Σ', Σ'' must be k";
  if (!f.sigp.contains(f.sp, tol.eq)) return "S' not inside Σ'";
  if (!f.sigpp.contains(f.spp, tol.eq)) return "S'' not inside Σ''";
  CMatrix both(d, d);
  both << f.sigp.basis(), f.sigpp.basis();
  if (numerical_rank(both, tol.rank) != d) return "Σ' ∩ Σ'' is not zero";
  return std::nullopt;
}

inline void validate(const Flag& f, const Tolerances& tol = default_tolerances()) {
  if (auto why = flag_violation(f, tol)) throw GeometryError("invalid flag: " + *why);
}

inline bool flags_equal(const Flag& a, const Flag& b, double tol = default_tolerances().eq) {
  return a.n == b.n && a.k == b.k && subspace_eq(a.sp, b.sp, tol) && subspace_eq(a.spp, b.spp, tol) &&
         subspace_eq(a.sigp, b.sigp, tol) && subspace_eq(a.sigpp, b.sigpp, tol);
}

/// Largest slotwise projector distance.
inline double flag_distance(const Flag& a, const Flag& b) {
  return std::max({projector_distance(a.sp, b.sp), projector_distance(a.spp, b.spp),
                   projector_distance(a.sigp, b.sigp), projector_distance(a.sigpp, b.sigpp)});
}

inline bool zpoints_equal(const ZPoint& a, const ZPoint& b, double tol = default_tolerances().eq) {
  return (a.y - b.y).norm() <= tol * std::max(1.0, a.y.norm()) && flags_equal(a.flag, b.flag, tol);
}

namespace detail {

// Unit columns e_{first+1} .. e_{first+count} (0-based first) of C^d.
inline CMatrix unit_block(Index d, Index first, Index count) {
  CMatrix m = CMatrix::Zero(d, count);
  for (Index j = 0; j < count; ++j) m(first + j, j) = 1.0;
  return m;
}

}  // namespace detail

inline Flag standard_flag(int n, int k) {
  check_nk(n, k);
  const Index d = 2 * k;
  Flag f;
  f.n = n;
  f.k = k;
  f.sp = CSubspace::from_orthonormal(detail::unit_block(d, n, k - n));
  f.spp = CSubspace::from_orthonormal(detail::unit_block(d, k + n, k - n));
  f.sigp = CSubspace::from_orthonormal(detail::unit_block(d, 0, k));
  f.sigpp = CSubspace::from_orthonormal(detail::unit_block(d, k, k));
  return f;
}

/// Flag of the complexified J~ = Jx ⊕ Jn (tangent factor first):
/// Σ' = Eig(i), Σ'' = Eig(−i), S', S'' their intersections with {0} ⊕ N^C.
inline Flag flag_from_acs(const RMatrix& jx, const RMatrix& jn, const Tolerances& tol = default_tolerances()) {
  require_acs(jx, tol);
  if (jn.size() != 0) require_acs(jn, tol);
  if (jx.rows() == 0) throw GeometryError("flag_from_acs: empty tangent factor");
  const int n = static_cast<int>(jx.rows() / 2);
  const int k = n + static_cast<int>(jn.rows() / 2);
  const Index d = 2 * k;
  RMatrix jt = RMatrix::Zero(d, d);
  jt.topLeftCorner(2 * n, 2 * n) = jx;
  if (jn.size() != 0) jt.bottomRightCorner(jn.rows(), jn.cols()) = jn;
  const EigenSplitting e = eig_pm_i(jt, tol);
  const CSubspace normal = CSubspace::from_orthonormal(detail::unit_block(d, 2 * n, d - 2 * n));
  Flag f{n, k, intersection(normal, e.plus, tol.rank), intersection(normal, e.minus, tol.rank), e.plus, e.minus};
  validate(f, tol);
  return f;
}

// ---------------------------------------------------------------------------
// Graph coordinates

/// 1-based coordinate pair (i, j) of a z_{ij} entry.
struct ChartIndex {
  int i;
  int j;
};

/// Chart coordinates of a flag relative to the standard flag.
struct ChartCoords {
  int n = 0;
  int k = 0;
  CMatrix zS1;    // n × (k−n):   i ∈ 1..n,      j ∈ n+1..k
  CMatrix zS2;    // n × (k−n):   i ∈ k+1..k+n,  j ∈ k+n+1..2k
  CMatrix zSig1;  // k × k:       i ∈ k+1..2k,   j ∈ 1..k
  CMatrix zSig2;  // k × k:       i ∈ 1..k,      j ∈ k+1..2k

  static ChartCoords zero(int n, int k) {
    check_nk(n, k);
    return {n, k, CMatrix::Zero(n, k - n), CMatrix::Zero(n, k - n), CMatrix::Zero(k, k), CMatrix::Zero(k, k)};
  }

  Index size() const { return 2 * (Index(k) * k + Index(n) * (k - n)); }

  /// Entries in the fixed index order: zS1, zS2, zSig1, zSig2, each row-major.
  CVector flatten() const {
    CVector v(size());
    Index p = 0;
    for (const CMatrix* m : {&zS1, &zS2, &zSig1, &zSig2}) {
      for (Index r = 0; r < m->rows(); ++r)
        for (Index c = 0; c < m->cols(); ++c) v(p++) = (*m)(r, c);
    }
    return v;
  }

  static ChartCoords unflatten(int n, int k, const CVector& v) {
    ChartCoords z = zero(n, k);
    if (v.size() != z.size()) throw GeometryError("chart vector has wrong length");
    Index p = 0;
    for (CMatrix* m : {&z.zS1, &z.zS2, &z.zSig1, &z.zSig2}) {
      for (Index r = 0; r < m->rows(); ++r)
        for (Index c = 0; c < m->cols(); ++c) (*m)(r, c) = v(p++);
    }
    return z;
  }

  double norm() const { return flatten().norm(); }
};

/// The ordered admissible index pairs, matching ChartCoords::flatten.
inline std::vector<ChartIndex> index_set_I(int n, int k) {
  check_nk(n, k);
  std::vector<ChartIndex> out;
  out.reserve(2 * (k * k + n * (k - n)));
  for (int i = 1; i <= n; ++i)
    for (int j = n + 1; j <= k; ++j) out.push_back({i, j});
  for (int i = k + 1; i <= k + n; ++i)
    for (int j = k + n + 1; j <= 2 * k; ++j) out.push_back({i, j});
  for (int i = k + 1; i <= 2 * k; ++i)
    for (int j = 1; j <= k; ++j) out.push_back({i, j});
  for (int i = 1; i <= k; ++i)
    for (int j = k + 1; j <= 2 * k; ++j) out.push_back({i, j});
  return out;
}

/// Position of z_{ij} within the flattened coordinates, if (i,j) is admissible.
inline std::optional<Index> flat_index(int n, int k, int i, int j) {
  const Index b1 = Index(n) * (k - n), b2 = 2 * b1, b3 = b2 + Index(k) * k;
  if (i >= 1 && i <= n && j > n && j <= k) return (i - 1) * Index(k - n) + (j - n - 1);
  if (i > k && i <= k + n && j > k + n && j <= 2 * k) return b1 + (i - k - 1) * Index(k - n) + (j - k - n - 1);
  if (i > k && i <= 2 * k && j >= 1 && j <= k) return b2 + (i - k - 1) * Index(k) + (j - 1);
  if (i >= 1 && i <= k && j > k && j <= 2 * k) return b3 + (i - 1) * Index(k) + (j - k - 1);
  return std::nullopt;
}

namespace detail {

inline constexpr double kMaxChartCondition = 1e8;

/// Basis matrices (not orthonormal) of the four flag slots.
struct FlagBases {
  CMatrix sp, spp, sigp, sigpp;
};

inline FlagBases bases_of(const Flag& f) { return {f.sp.basis(), f.spp.basis(), f.sigp.basis(), f.sigpp.basis()}; }

inline FlagBases map_bases(const CMatrix& m, const FlagBases& b) { return {m * b.sp, m * b.spp, m * b.sigp, m * b.sigpp}; }

inline CMatrix stack(const CMatrix& top, const CMatrix& bottom) {
  CMatrix out(top.rows() + bottom.rows(), top.cols());
  out << top, bottom;
  return out;
}

// Standard-chart bases: Σ' = [I; Zσ1], Σ'' = [Zσ2; I], S' = Σ'·[zS1; I],
// S'' = Σ''·[zS2; I]. The last two lie in Σ', Σ'' by construction.
inline FlagBases decode_bases(const ChartCoords& z) {
  const int n = z.n, k = z.k;
  FlagBases b;
  b.sigp = stack(CMatrix::Identity(k, k), z.zSig1);
  b.sigpp = stack(z.zSig2, CMatrix::Identity(k, k));
  b.sp = b.sigp * stack(z.zS1, CMatrix::Identity(k - n, k - n));
  b.spp = b.sigpp * stack(z.zS2, CMatrix::Identity(k - n, k - n));
  return b;
}

// Derivative of decode_bases at z in direction dz.
inline FlagBases decode_bases_derivative(const ChartCoords& z, const ChartCoords& dz) {
  const int n = z.n, k = z.k;
  const FlagBases b = decode_bases(z);
  FlagBases db;
  db.sigp = stack(CMatrix::Zero(k, k), dz.zSig1);
  db.sigpp = stack(dz.zSig2, CMatrix::Zero(k, k));
  db.sp = db.sigp * stack(z.zS1, CMatrix::Identity(k - n, k - n)) +
          b.sigp * stack(dz.zS1, CMatrix::Zero(k - n, k - n));
  db.spp = db.sigpp * stack(z.zS2, CMatrix::Identity(k - n, k - n)) +
           b.sigpp * stack(dz.zS2, CMatrix::Zero(k - n, k - n));
  return db;
}

// value · domain⁻¹ and, if requested, its derivative.
inline CMatrix graph_slope(const CMatrix& domain, const CMatrix& value, const CMatrix* ddomain,
                           const CMatrix* dvalue, CMatrix* dslope) {
  if (domain.rows() == 0) {
    if (dslope) *dslope = CMatrix::Zero(value.rows(), 0);
    return CMatrix::Zero(value.rows(), 0);
  }
  if (condition_number(domain) > kMaxChartCondition) throw GeometryError("chart domain violated");
  // X·D = V  ⇔  Dᵀ Xᵀ = Vᵀ
  const Eigen::PartialPivLU<CMatrix> lu(domain.transpose());
  const CMatrix slope = lu.solve(CMatrix(value.transpose())).transpose();
  if (dslope) *dslope = lu.solve(CMatrix((*dvalue - slope * *ddomain).transpose())).transpose();
  return slope;
}

// Inverse of decode_bases on arbitrary bases spanning the slots. The slot
// bases must have exactly the right column counts.
inline ChartCoords encode_bases(int n, int k, const FlagBases& b, const FlagBases* db = nullptr,
                                ChartCoords* dz = nullptr) {
  ChartCoords z = ChartCoords::zero(n, k);
  if (dz) *dz = ChartCoords::zero(n, k);
  const Index kk = k, m = k - n;
  auto slot = [&](const CMatrix& dom, const CMatrix& val, const CMatrix& ddom, const CMatrix& dval, CMatrix& out,
                  CMatrix* dout) {
    out = graph_slope(dom, val, db ? &ddom : nullptr, db ? &dval : nullptr, dout);
  };
  const FlagBases zero_db;
  const FlagBases& d = db ? *db : zero_db;
  auto rows = [](const CMatrix& x, Index r0, Index cnt) -> CMatrix {
    return x.size() == 0 ? CMatrix(cnt, x.cols()) : CMatrix(x.middleRows(r0, cnt));
  };
  // Σ': domain rows 0..k−1, value rows k..2k−1.
  slot(rows(b.sigp, 0, kk), rows(b.sigp, kk, kk), db ? rows(d.sigp, 0, kk) : CMatrix(),
       db ? rows(d.sigp, kk, kk) : CMatrix(), z.zSig1, dz ? &dz->zSig1 : nullptr);
  // Σ'': domain rows k..2k−1, value rows 0..k−1.
  slot(rows(b.sigpp, kk, kk), rows(b.sigpp, 0, kk), db ? rows(d.sigpp, kk, kk) : CMatrix(),
       db ? rows(d.sigpp, 0, kk) : CMatrix(), z.zSig2, dz ? &dz->zSig2 : nullptr);
  if (m > 0) {
    // S' ⊂ Σ' is read off its top block s = rows 0..k−1: value rows 0..n−1, domain rows n..k−1.
    slot(rows(b.sp, n, m), rows(b.sp, 0, n), db ? rows(d.sp, n, m) : CMatrix(), db ? rows(d.sp, 0, n) : CMatrix(),
         z.zS1, dz ? &dz->zS1 : nullptr);
    // S'' ⊂ Σ'' from its bottom block rows k..2k−1.
    slot(rows(b.spp, kk + n, m), rows(b.spp, kk, n), db ? rows(d.spp, kk + n, m) : CMatrix(),
         db ? rows(d.spp, kk, n) : CMatrix(), z.zS2, dz ? &dz->zS2 : nullptr);
  }
  return z;
}

inline void check_bases(int n, int k, const FlagBases& b) {
  if (b.sp.cols() != k - n || b.spp.cols() != k - n || b.sigp.cols() != k || b.sigpp.cols() != k) {
    throw GeometryError("flag slot dimensions do not match (n,k)");
  }
}

inline Flag flag_from_bases(int n, int k, const FlagBases& b) {
  const Index d = 2 * k;
  auto sp = [&](const CMatrix& m) { return m.cols() == 0 ? CSubspace::zero(d) : CSubspace::span_or_zero(m); };
  return Flag{n, k, sp(b.sp), sp(b.spp), sp(b.sigp), sp(b.sigpp)};
}

/// Φ_M(Z) = encode(M · decode(Z)): the coordinate change induced by M ∈ GL_{2k}.
inline ChartCoords transform_coords(const CMatrix& m, const ChartCoords& z) {
  return encode_bases(z.n, z.k, map_bases(m, decode_bases(z)));
}

/// DΦ_M(Z)[dZ], exact.
inline ChartCoords transform_coords_derivative(const CMatrix& m, const ChartCoords& z, const ChartCoords& dz) {
  const FlagBases b = map_bases(m, decode_bases(z));
  const FlagBases db = map_bases(m, decode_bases_derivative(z, dz));
  ChartCoords out;
  encode_bases(z.n, z.k, b, &db, &out);
  return out;
}

// Orthonormal columns completing sub inside big, chosen greedily from the
// columns of big by largest residual; ties go to the lowest index.
inline CMatrix complement_within(const CMatrix& big, const CSubspace& sub, Index count) {
  CMatrix res = big - sub.basis() * (sub.basis().adjoint() * big);
  CMatrix out(big.rows(), count);
  for (Index c = 0; c < count; ++c) {
    Index best = 0;
    double best_norm = -1.0;
    for (Index j = 0; j < res.cols(); ++j) {
      const double nj = res.col(j).norm();
      if (nj > best_norm * (1.0 + 1e-12)) {
        best = j;
        best_norm = nj;
      }
    }
    if (best_norm <= 1e-12) throw GeometryError("invalid flag: no complement");
    const CVector q = res.col(best) / best_norm;
    out.col(c) = q;
    res -= q * (q.adjoint() * res);
  }
  return out;
}

}  // namespace detail

inline CMatrix gl_checked(const CMatrix& b, int k) {
  if (b.rows() != 2 * k || b.cols() != 2 * k) throw GeometryError("matrix must be 2k x 2k");
  if (numerical_rank(b) != 2 * k) throw GeometryError("singular matrix");
  return b;
}

inline Flag gl_act(const CMatrix& b, const Flag& f) {
  gl_checked(b, f.k);
  return detail::flag_from_bases(f.n, f.k, detail::map_bases(b, detail::bases_of(f)));
}

/// B₀ with gl_act(B₀, f₀) = f: columns are a complement of S' in Σ', a basis
/// of S', then the same for S'' in Σ''. Gives the identity on f₀.
inline CMatrix transitivity_witness(const Flag& f) {
  validate(f);
  const int n = f.n, k = f.k;
  CMatrix b(2 * k, 2 * k);
  b << detail::complement_within(f.sigp.basis(), f.sp, n), f.sp.basis(),
      detail::complement_within(f.sigpp.basis(), f.spp, n), f.spp.basis();
  return b;
}

/// Block pattern of the stabiliser of f₀.
inline bool stabilizer_check(const CMatrix& b, int n, int k, double tol = default_tolerances().eq) {
  check_nk(n, k);
  gl_checked(b, k);
  const double scale = std::max(1.0, b.cwiseAbs().maxCoeff());
  auto small = [&](const CMatrix& blk) { return blk.size() == 0 || blk.cwiseAbs().maxCoeff() <= tol * scale; };
  return small(b.block(k, 0, k, k)) && small(b.block(0, k, k, k)) && small(b.block(0, n, n, k - n)) &&
         small(b.block(k, k + n, n, k - n));
}

/// Fixed-point criterion for the stabiliser.
inline bool fixes_standard_flag(const CMatrix& b, int n, int k, double tol = default_tolerances().eq) {
  const Flag f0 = standard_flag(n, k);
  return flags_equal(gl_act(b, f0), f0, tol);
}

/// Coordinates of flag in the chart centred at center (standard complements
/// carried over by the witness of center).
inline ChartCoords chart_encode(const Flag& f, const Flag& center) {
  validate(f);
  if (f.n != center.n || f.k != center.k) throw GeometryError("chart_encode: (n,k) mismatch");
  const CMatrix b0 = transitivity_witness(center);
  const Eigen::PartialPivLU<CMatrix> lu(b0);
  const detail::FlagBases fb = detail::bases_of(f);
  return detail::encode_bases(f.n, f.k, {lu.solve(fb.sp), lu.solve(fb.spp), lu.solve(fb.sigp), lu.solve(fb.sigpp)});
}

inline Flag chart_decode(const ChartCoords& z, const Flag& center) {
  if (z.n != center.n || z.k != center.k) throw GeometryError("chart_decode: (n,k) mismatch");
  const CMatrix b0 = transitivity_witness(center);
  return detail::flag_from_bases(z.n, z.k, detail::map_bases(b0, detail::decode_bases(z)));
}

/// (y, S', S'', Σ', Σ'') ↦ (ȳ, S̄'', S̄', Σ̄'', Σ̄').
inline ZPoint involution(const ZPoint& p) {
  const Flag& f = p.flag;
  return ZPoint{p.y.conjugate(), Flag{f.n, f.k, f.spp.conjugate(), f.sp.conjugate(), f.sigpp.conjugate(),
                                      f.sigp.conjugate()}};
}

inline bool is_real_point(const ZPoint& p, double tol = default_tolerances().eq) {
  return zpoints_equal(involution(p), p, tol);
}

}  // namespace acx
