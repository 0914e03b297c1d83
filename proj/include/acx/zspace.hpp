#pragma once

// The directed manifold Z_n(C^{2k}) with its distribution D: charts,
// torsion θ = [·,·] mod D, the operator Θ(w,V) and affine fibre arithmetic.
//
// Chart coordinates of a point are (x, Z) with x ∈ C^{2k} and Z the graph
// coordinates of the flag; a chart is fixed by an affine frame (B, shift):
// x = B⁻¹(y − shift), Z = coordinates of B⁻¹·flag relative to f₀.
// In these coordinates D at (x, Z) is {(ξ, ζ) : ξ ∈ Δ(Z)} where Δ(Z) is the
// decoded S' ⊕ Σ'', a graph ξ_top = A(Z)·ξ_bot over span(e_{n+1..2k}).

#include "acx/flags.hpp"

#include <vector>

namespace acx {

inline int dim_N(int n, int k) {
  check_nk(n, k);
  return 2 * k + 2 * (k * k + n * (k - n));
}

/// Tangent vector in chart coordinates: ∂/∂x_l and ∂/∂z_{ij} components,
/// the latter in index_set_I order.
struct TangentVec {
  CVector x_part;
  CVector z_part;

  static TangentVec zero(int n, int k) { return {CVector::Zero(2 * k), CVector::Zero(dim_N(n, k) - 2 * k)}; }

  CVector flatten() const {
    CVector v(x_part.size() + z_part.size());
    v << x_part, z_part;
    return v;
  }
  static TangentVec unflatten(int k, const CVector& v) { return {v.head(2 * k), v.tail(v.size() - 2 * k)}; }
};

inline TangentVec operator+(const TangentVec& a, const TangentVec& b) { return {a.x_part + b.x_part, a.z_part + b.z_part}; }
inline TangentVec operator*(cplx s, const TangentVec& a) { return {s * a.x_part, s * a.z_part}; }

/// Coefficients of ∂/∂x_i, i = 1..n, modulo D.
struct QuotientVec {
  CVector c;
};

struct Chart {
  int n = 0;
  int k = 0;
  CMatrix frame;      // B
  CMatrix frame_inv;  // B⁻¹
  CVector shift;

  static Chart standard(int n, int k) {
    check_nk(n, k);
    const CMatrix id = CMatrix::Identity(2 * k, 2 * k);
    return {n, k, id, id, CVector::Zero(2 * k)};
  }

  static Chart from_frame(int n, int k, const CMatrix& b, const CVector& shift) {
    check_nk(n, k);
    gl_checked(b, k);
    return {n, k, b, b.inverse(), shift};
  }

  /// The chart in which w has coordinates (0, 0).
  static Chart centered_at(const ZPoint& w) {
    return from_frame(w.flag.n, w.flag.k, transitivity_witness(w.flag), w.y);
  }

  /// Image chart under the affine map y ↦ G y + c.
  Chart transported(const CMatrix& g, const CVector& c) const { return from_frame(n, k, g * frame, g * shift + c); }
};

struct ChartPoint {
  CVector x;
  ChartCoords z;
};

inline ChartPoint chart_coordinates(const ZPoint& w, const Chart& c) {
  validate(w.flag);
  if (w.flag.n != c.n || w.flag.k != c.k) throw GeometryError("chart and point disagree on (n,k)");
  const detail::FlagBases b = detail::map_bases(c.frame_inv, detail::bases_of(w.flag));
  return {c.frame_inv * (w.y - c.shift), detail::encode_bases(c.n, c.k, b)};
}

inline ZPoint chart_point(const ChartPoint& p, const Chart& c) {
  return {c.frame * p.x + c.shift,
          detail::flag_from_bases(c.n, c.k, detail::map_bases(c.frame, detail::decode_bases(p.z)))};
}

/// A(Z): Δ(Z) = {(A ξ_b, ξ_b)} with ξ_b ∈ C^{2k−n}.
inline CMatrix delta_graph(const ChartCoords& z) {
  const int n = z.n, k = z.k;
  const detail::FlagBases b = detail::decode_bases(z);
  CMatrix d(2 * k, 2 * k - n);
  d << b.sp, b.sigpp;
  const CMatrix bot = d.bottomRows(2 * k - n);
  if (condition_number(bot) > detail::kMaxChartCondition) throw GeometryError("chart domain violated");
  return bot.transpose().partialPivLu().solve(d.topRows(n).transpose()).transpose();
}

/// ω(ξ) = ξ_top − A ξ_bot: the class of an x-vector in T/D.
inline CVector quotient_class(const CMatrix& a, const CVector& x) {
  const Index n = a.rows();
  return x.head(n) - a * x.tail(x.size() - n);
}

inline void require_in_distribution(const CMatrix& a, const TangentVec& v, double tol = 1e-9) {
  const double r = quotient_class(a, v.x_part).norm();
  if (r > tol * std::max(1.0, v.flatten().norm())) {
    throw GeometryError("vector not in the distribution (residual " + std::to_string(r) + ")");
  }
}

/// 2k−n graph vectors (A e_j, e_j) followed by the ∂/∂z units: N−n vectors.
inline std::vector<TangentVec> distribution_frame(const ZPoint& w, const Chart& c) {
  const ChartPoint p = chart_coordinates(w, c);
  const CMatrix a = delta_graph(p.z);
  const int n = c.n, k = c.k, m = dim_N(n, k) - 2 * k;
  std::vector<TangentVec> out;
  out.reserve(2 * k - n + m);
  for (int j = 0; j < 2 * k - n; ++j) {
    TangentVec v = TangentVec::zero(n, k);
    v.x_part.head(n) = a.col(j);
    v.x_part(n + j) = 1.0;
    out.push_back(std::move(v));
  }
  for (int p2 = 0; p2 < m; ++p2) {
    TangentVec v = TangentVec::zero(n, k);
    v.z_part(p2) = 1.0;
    out.push_back(std::move(v));
  }
  return out;
}

inline CMatrix frame_matrix(const std::vector<TangentVec>& frame) {
  if (frame.empty()) return CMatrix();
  CMatrix m(frame.front().flatten().size(), static_cast<Index>(frame.size()));
  for (std::size_t i = 0; i < frame.size(); ++i) m.col(static_cast<Index>(i)) = frame[i].flatten();
  return m;
}

namespace detail {

inline void require_central_d(int n, const TangentVec& v) {
  if (v.x_part.head(n).norm() > 1e-12 * std::max(1.0, v.flatten().norm())) {
    throw GeometryError("vector not in the distribution at the centre");
  }
}

inline void check_tangent_shape(int n, int k, const TangentVec& v) {
  if (v.x_part.size() != 2 * k || v.z_part.size() != dim_N(n, k) - 2 * k) {
    throw GeometryError("tangent vector has wrong shape");
  }
}

}  // namespace detail

/// θ at the chart centre:
/// θ_i = −Σ_{j=n+1..2k} (X_j Y_{ij} − Y_j X_{ij}), i = 1..n.
inline QuotientVec torsion_central(int n, int k, const TangentVec& x, const TangentVec& y) {
  detail::check_tangent_shape(n, k, x);
  detail::check_tangent_shape(n, k, y);
  detail::require_central_d(n, x);
  detail::require_central_d(n, y);
  CVector out = CVector::Zero(n);
  for (int i = 1; i <= n; ++i) {
    for (int j = n + 1; j <= 2 * k; ++j) {
      const Index p = *flat_index(n, k, i, j);  // zS1 for j ≤ k, zSig2 beyond
      out(i - 1) -= x.x_part(j - 1) * y.z_part(p) - y.x_part(j - 1) * x.z_part(p);
    }
  }
  return {out};
}

/// θ at the centre from the Lie bracket of explicit extensions
/// X~ = Σ_j X_j V_j + Σ X_{ij} ∂/∂z_{ij}, V_j = ∂/∂x_j + Σ_i a_{ij} ∂/∂x_i,
/// with a_{ij} = z_{ij} on admissible pairs (i ≤ k) and 0 otherwise.
/// All coefficients are affine in z so the bracket is exact.
inline QuotientVec torsion_bracket_oracle(int n, int k, const TangentVec& x, const TangentVec& y) {
  detail::check_tangent_shape(n, k, x);
  detail::check_tangent_shape(n, k, y);
  detail::require_central_d(n, x);
  detail::require_central_d(n, y);
  const int N = dim_N(n, k), m = N - 2 * k;
  // Field coefficients: column 0 constant, column 1+p linear in z_p.
  auto extend = [&](const TangentVec& v) {
    CMatrix f = CMatrix::Zero(N, 1 + m);
    for (int j = n + 1; j <= 2 * k; ++j) {
      const cplx c = v.x_part(j - 1);
      f(j - 1, 0) += c;
      for (int i = 1; i <= k; ++i) {
        if (auto p = flat_index(n, k, i, j)) f(i - 1, 1 + *p) += c;
      }
    }
    for (int p = 0; p < m; ++p) f(2 * k + p, 0) += v.z_part(p);
    return f;
  };
  const CMatrix fx = extend(x), fy = extend(y);
  // [X,Y]^c(0) = Σ_p X^{z_p}(0) ∂_p Y^c − Y^{z_p}(0) ∂_p X^c.
  CVector br = CVector::Zero(N);
  for (int p = 0; p < m; ++p) br += fx(2 * k + p, 0) * fy.col(1 + p) - fy(2 * k + p, 0) * fx.col(1 + p);
  // A(0) = 0, so the class mod D is the top n x-components.
  return {br.head(n)};
}

/// Re-expresses a tangent vector at w from chart `from` in chart `to`.
inline TangentVec transport(const TangentVec& v, const ZPoint& w, const Chart& from, const Chart& to) {
  const CMatrix m = to.frame_inv * from.frame;
  const ChartCoords z = chart_coordinates(w, from).z;
  const ChartCoords dz = ChartCoords::unflatten(from.n, from.k, v.z_part);
  return {m * v.x_part, detail::transform_coords_derivative(m, z, dz).flatten()};
}

inline QuotientVec transport(const QuotientVec& q, const ZPoint& w, const Chart& from, const Chart& to) {
  CVector x = CVector::Zero(2 * from.k);
  x.head(from.n) = q.c;
  const CMatrix a = delta_graph(chart_coordinates(w, to).z);
  return {quotient_class(a, to.frame_inv * (from.frame * x))};
}

/// θ(w)(ζ, η) for ζ, η given in chart c; the result is expressed in c.
inline QuotientVec torsion_at(const ZPoint& w, const TangentVec& zeta, const TangentVec& eta, const Chart& c) {
  const CMatrix a = delta_graph(chart_coordinates(w, c).z);
  require_in_distribution(a, zeta);
  require_in_distribution(a, eta);
  const Chart cw = Chart::centered_at(w);
  TangentVec z0 = transport(zeta, w, c, cw), e0 = transport(eta, w, c, cw);
  z0.x_part.head(c.n).setZero();  // exact at the centre; drops round-off
  e0.x_part.head(c.n).setZero();
  return transport(torsion_central(c.n, c.k, z0, e0), w, cw, c);
}

/// Affine automorphism y ↦ G y + c acting on points.
inline ZPoint affine_act(const CMatrix& g, const CVector& c, const ZPoint& w) {
  return {g * w.y + c, gl_act(g, w.flag)};
}

// ---------------------------------------------------------------------------
// Subspaces of the tangent space at w, in chart coordinates (C^N).

inline CSubspace x_block(int n, int k) {
  return CSubspace::from_orthonormal(detail::unit_block(dim_N(n, k), 0, 2 * k));
}
inline CSubspace z_block(int n, int k) {
  const int N = dim_N(n, k);
  return CSubspace::from_orthonormal(detail::unit_block(N, 2 * k, N - 2 * k));
}

/// Embeds a subspace of C^{2k} (x-directions) into C^N.
inline CSubspace lift_x(const CSubspace& s, int n, int k) {
  CMatrix b = CMatrix::Zero(dim_N(n, k), s.dim());
  b.topRows(2 * k) = s.basis();
  return CSubspace::from_orthonormal(b);
}

inline void require_tangent_subspace(const ZPoint& w, const CSubspace& v, const Chart& c) {
  const int n = c.n, k = c.k;
  if (v.ambient_dim() != dim_N(n, k)) throw GeometryError("subspace is not in the tangent space");
  if (v.dim() != n) throw GeometryError("subspace must have dimension n");
  const CMatrix a = delta_graph(chart_coordinates(w, c).z);
  for (Index j = 0; j < v.dim(); ++j) require_in_distribution(a, TangentVec::unflatten(k, v.basis().col(j)));
}

/// dπ injective on V.
inline bool in_gro(const ZPoint& w, const CSubspace& v, const Chart& c) {
  require_tangent_subspace(w, v, c);
  return numerical_rank(CMatrix(v.basis().topRows(2 * c.k))) == c.n;
}

inline double isotropy_defect(const ZPoint& w, const CSubspace& v, const Chart& c) {
  require_tangent_subspace(w, v, c);
  double worst = 0.0;
  for (Index a = 0; a < v.dim(); ++a) {
    for (Index b = a + 1; b < v.dim(); ++b) {
      const TangentVec va = TangentVec::unflatten(c.k, v.basis().col(a));
      const TangentVec vb = TangentVec::unflatten(c.k, v.basis().col(b));
      worst = std::max(worst, torsion_at(w, va, vb, c).c.norm());
    }
  }
  return worst;
}

inline bool is_isotropic(const ZPoint& w, const CSubspace& v, const Chart& c, double tol = 1e-9) {
  return isotropy_defect(w, v, c) < tol;
}

// ---------------------------------------------------------------------------
// Θ(w,V): Hom(V, T_rel) → Λ²V* ⊗ C^n, f ↦ θ(w) restricted to Γ(f).
// V ⊂ Δ_w ⊂ C^{2k} is given in ambient coordinates. Both sides are written in
// the chart centred at w using the orthonormal basis v_1..v_n of B₀⁻¹V:
// f is the n × (N−2k) matrix whose row a is f(v_a), flattened row-major;
// the output is indexed by (pair a<c in lexicographic order, i).

struct ThetaSetup {
  int n, k;
  CMatrix vbasis;  // 2k × n, centred-chart x-coordinates
};

inline ThetaSetup theta_setup(const ZPoint& w, const CSubspace& v) {
  const int n = w.flag.n, k = w.flag.k;
  validate(w.flag);
  if (v.ambient_dim() != 2 * k || v.dim() != n) throw GeometryError("Θ: V must be an n-dimensional subspace of C^2k");
  const CSubspace delta = subspace_sum(w.flag.sp, w.flag.sigpp);
  if (!delta.contains(v)) throw GeometryError("Θ: V is not inside Δ_w");
  const CMatrix b0 = transitivity_witness(w.flag);
  return {n, k, CSubspace::span_or_zero(b0.partialPivLu().solve(v.basis())).basis()};
}

inline CVector theta_apply(const ThetaSetup& s, const CMatrix& f) {
  const int n = s.n, k = s.k, m = dim_N(n, k) - 2 * k;
  if (f.rows() != n || f.cols() != m) throw GeometryError("Θ: f has wrong shape");
  CVector out(n * (n * (n - 1) / 2));
  Index r = 0;
  for (int a = 0; a < n; ++a) {
    for (int c = a + 1; c < n; ++c) {
      const TangentVec ta{s.vbasis.col(a), f.row(a).transpose()};
      const TangentVec tc{s.vbasis.col(c), f.row(c).transpose()};
      out.segment(r, n) = torsion_central(n, k, ta, tc).c;
      r += n;
    }
  }
  return out;
}

inline CMatrix theta_matrix(const ThetaSetup& s) {
  const int n = s.n, m = dim_N(n, s.k) - 2 * s.k;
  CMatrix out(n * (n * (n - 1) / 2), n * m);
  for (int a = 0; a < n; ++a) {
    for (int p = 0; p < m; ++p) {
      CMatrix f = CMatrix::Zero(n, m);
      f(a, p) = 1.0;
      out.col(a * m + p) = theta_apply(s, f);
    }
  }
  return out;
}

inline CMatrix theta_matrix(const ZPoint& w, const CSubspace& v) { return theta_matrix(theta_setup(w, v)); }

inline int theta_kernel_dim(const ZPoint& w, const CSubspace& v) {
  const CMatrix t = theta_matrix(w, v);
  return static_cast<int>(t.cols()) - (t.rows() == 0 ? 0 : numerical_rank(t));
}

/// Γ(f) ⊂ T_w written in the chart centred at w: basis vectors (v_a, f(v_a)).
inline CSubspace theta_graph(const ThetaSetup& s, const CMatrix& f) {
  const int N = dim_N(s.n, s.k);
  CMatrix b(N, s.n);
  b.topRows(2 * s.k) = s.vbasis;
  b.bottomRows(N - 2 * s.k) = f.transpose();
  return CSubspace::span_or_zero(b);
}

// ---------------------------------------------------------------------------
// Affine fibre: graphs over a fixed S ⊂ x-block with values in T_rel.

/// Γ(f + g) where G = Γ(g).
inline CSubspace fiber_translate(const LinMap& f, const CSubspace& g, int n, int k) {
  const CSubspace xb = x_block(n, k), zb = z_block(n, k);
  if (!xb.contains(f.domain) || !subspace_eq(f.codomain, zb)) throw GeometryError("f must map S into T_rel");
  LinMap gm = [&] {
    try {
      return graph_decode(g, xb, zb);
    } catch (const GeometryError&) {
      throw GeometryError("not a graph over S");
    }
  }();
  if (!subspace_eq(gm.domain, f.domain)) throw GeometryError("not a graph over S");
  return graph_of(f + gm);
}

/// The g with G = Γ(g), written on the basis of s.
inline LinMap fiber_decode(const CSubspace& g, const CSubspace& s, int n, int k) {
  const LinMap gm = graph_decode(g, x_block(n, k), z_block(n, k));
  if (!subspace_eq(gm.domain, s)) throw GeometryError("not a graph over S");
  return gm.rebased(s);
}

}  // namespace acx
