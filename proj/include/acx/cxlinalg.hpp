#pragma once

// Complex linear algebra on explicit basis matrices: subspaces held as
// orthonormal bases, projector equality, intersections, graphs of linear
// maps and the +/-i eigenspaces of real almost complex matrices.

#include <Eigen/Dense>

#include <algorithm>
#include <complex>
#include <limits>
#include <stdexcept>
#include <string>

namespace acx {

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;
using RVector = Eigen::VectorXd;
using Index = Eigen::Index;

inline constexpr cplx kI{0.0, 1.0};

class GeometryError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Tolerances {
  double rank = 1e-9;  // relative singular-value cutoff
  double eq = 1e-9;    // projector distance for subspace equality
  double acs = 1e-10;  // residual of J^2 + I
};

inline const Tolerances& default_tolerances() {
  static const Tolerances tol{};
  return tol;
}

inline RVector singular_values(const CMatrix& m) {
  if (m.size() == 0) return RVector{};
  return Eigen::JacobiSVD<CMatrix>(m).singularValues();
}

/// Number of singular values above tol times the largest one.
inline int numerical_rank(const CMatrix& m, double tol = default_tolerances().rank) {
  const RVector s = singular_values(m);
  if (s.size() == 0 || s(0) == 0.0) return 0;
  return static_cast<int>((s.array() > tol * s(0)).count());
}

inline int numerical_rank(const RMatrix& m, double tol = default_tolerances().rank) {
  if (m.size() == 0) return 0;
  const RVector s = Eigen::JacobiSVD<RMatrix>(m).singularValues();
  if (s(0) == 0.0) return 0;
  return static_cast<int>((s.array() > tol * s(0)).count());
}

inline double operator_norm(const CMatrix& m) {
  const RVector s = singular_values(m);
  return s.size() == 0 ? 0.0 : s(0);
}

/// Ratio of largest to smallest singular value; infinity when singular.
inline double condition_number(const CMatrix& m) {
  const RVector s = singular_values(m);
  if (s.size() == 0) return 1.0;
  const double lo = s(s.size() - 1);
  return lo == 0.0 ? std::numeric_limits<double>::infinity() : s(0) / lo;
}

namespace detail {

// Orthonormal basis of the column span. The pivoted Householder factor is
// phase-normalised so that coordinate-aligned inputs come back unchanged.
inline CMatrix orthonormal_span(const CMatrix& cols, int rank) {
  const Index d = cols.rows();
  if (rank == 0) return CMatrix(d, 0);
  Eigen::ColPivHouseholderQR<CMatrix> qr(cols);
  CMatrix q = qr.householderQ() * CMatrix::Identity(d, rank);
  const CMatrix& r = qr.matrixQR();
  for (Index j = 0; j < rank; ++j) {
    const double a = std::abs(r(j, j));
    if (a > 0.0) q.col(j) *= r(j, j) / a;
  }
  return q;
}

}  // namespace detail

/// A complex linear subspace of C^d stored by an orthonormal basis.
class CSubspace {
 public:
  explicit CSubspace(Index ambient = 0) : basis_(ambient, 0) {}

  static CSubspace zero(Index ambient) { return CSubspace(ambient); }
  static CSubspace whole(Index ambient) {
    return from_orthonormal(CMatrix::Identity(ambient, ambient));
  }

  /// Span of the given columns; an empty column set yields the zero subspace.
  static CSubspace span_or_zero(const CMatrix& cols, double tol = default_tolerances().rank) {
    if (cols.cols() == 0) return zero(cols.rows());
    return from_orthonormal(detail::orthonormal_span(cols, numerical_rank(cols, tol)));
  }

  /// Trusts that the columns are orthonormal.
  static CSubspace from_orthonormal(CMatrix q) {
    CSubspace s;
    s.basis_ = std::move(q);
    return s;
  }

  Index ambient_dim() const { return basis_.rows(); }
  Index dim() const { return basis_.cols(); }
  const CMatrix& basis() const { return basis_; }

  CMatrix projector() const { return basis_ * basis_.adjoint(); }

  /// Component of v orthogonal to the subspace.
  CVector residual(const CVector& v) const { return v - basis_ * (basis_.adjoint() * v); }

  bool contains(const CVector& v, double tol = default_tolerances().eq) const {
    return residual(v).norm() <= tol * std::max(1.0, v.norm());
  }

  bool contains(const CSubspace& other, double tol = default_tolerances().eq) const {
    if (other.ambient_dim() != ambient_dim()) throw GeometryError("ambient dimension mismatch");
    if (other.dim() == 0) return true;
    return operator_norm(other.basis_ - basis_ * (basis_.adjoint() * other.basis_)) <= tol;
  }

  CSubspace conjugate() const { return from_orthonormal(basis_.conjugate()); }

  /// Image under a linear map of the ambient space.
  CSubspace image(const CMatrix& m) const { return span_or_zero(m * basis_); }

 private:
  CMatrix basis_;
};

/// Column span. Throws on an all-zero input.
inline CSubspace span(const CMatrix& cols, double tol = default_tolerances().rank) {
  if (cols.size() == 0) throw GeometryError("zero span: empty matrix");
  if (cols.cwiseAbs().maxCoeff() == 0.0) throw GeometryError("zero span");
  return CSubspace::span_or_zero(cols, tol);
}

/// True iff the orthogonal projectors agree to tol in operator norm.
inline bool subspace_eq(const CSubspace& a, const CSubspace& b, double tol = default_tolerances().eq) {
  if (a.ambient_dim() != b.ambient_dim()) throw GeometryError("ambient dimension mismatch");
  if (a.dim() != b.dim()) return false;
  if (a.dim() == 0) return true;
  // For equal dimensions ||P_A - P_B|| = ||(I - P_A) Q_B||.
  return operator_norm(b.basis() - a.basis() * (a.basis().adjoint() * b.basis())) < tol;
}

inline double projector_distance(const CSubspace& a, const CSubspace& b) {
  if (a.ambient_dim() != b.ambient_dim()) throw GeometryError("ambient dimension mismatch");
  return operator_norm(a.projector() - b.projector());
}

/// A + B.
inline CSubspace subspace_sum(const CSubspace& a, const CSubspace& b, double tol = default_tolerances().rank) {
  if (a.ambient_dim() != b.ambient_dim()) throw GeometryError("ambient dimension mismatch");
  CMatrix cols(a.ambient_dim(), a.dim() + b.dim());
  cols << a.basis(), b.basis();
  return CSubspace::span_or_zero(cols, tol);
}

/// A ∩ B as the kernel of the stacked complementary projectors.
inline CSubspace intersection(const CSubspace& a, const CSubspace& b, double tol = default_tolerances().rank) {
  if (a.ambient_dim() != b.ambient_dim()) throw GeometryError("ambient dimension mismatch");
  const Index d = a.ambient_dim();
  if (d == 0 || a.dim() == 0 || b.dim() == 0) return CSubspace::zero(d);
  CMatrix stacked(2 * d, d);
  const CMatrix id = CMatrix::Identity(d, d);
  stacked << id - a.projector(), id - b.projector();
  Eigen::JacobiSVD<CMatrix> svd(stacked, Eigen::ComputeFullV);
  const RVector& s = svd.singularValues();
  const double cutoff = tol * std::max(1.0, s(0));
  Index r = 0;
  while (r < s.size() && s(r) > cutoff) ++r;
  return CSubspace::span_or_zero(svd.matrixV().rightCols(d - r), tol);
}

/// Linear map between two subspaces, matrix taken in their stored bases.
struct LinMap {
  CSubspace domain;
  CSubspace codomain;
  CMatrix matrix;

  LinMap(CSubspace dom, CSubspace cod, CMatrix m)
      : domain(std::move(dom)), codomain(std::move(cod)), matrix(std::move(m)) {
    if (matrix.rows() != codomain.dim() || matrix.cols() != domain.dim()) {
      throw GeometryError("LinMap: matrix is " + std::to_string(matrix.rows()) + "x" +
                          std::to_string(matrix.cols()) + ", expected " + std::to_string(codomain.dim()) +
                          "x" + std::to_string(domain.dim()));
    }
  }

  static LinMap zero(CSubspace dom, CSubspace cod) {
    CMatrix m = CMatrix::Zero(cod.dim(), dom.dim());
    return LinMap(std::move(dom), std::move(cod), std::move(m));
  }

  /// Restriction of an ambient matrix, assumed to send domain into codomain.
  static LinMap from_ambient(CSubspace dom, CSubspace cod, const CMatrix& ambient) {
    CMatrix m = cod.basis().adjoint() * ambient * dom.basis();
    return LinMap(std::move(dom), std::move(cod), std::move(m));
  }

  /// Matrix of the map in ambient coordinates (zero off the domain).
  CMatrix ambient_matrix() const { return codomain.basis() * matrix * domain.basis().adjoint(); }

  CVector apply(const CVector& v) const { return codomain.basis() * (matrix * (domain.basis().adjoint() * v)); }

  /// Same map written against another basis of an equal domain.
  LinMap rebased(const CSubspace& dom) const {
    if (!subspace_eq(dom, domain)) throw GeometryError("LinMap: domains differ");
    return LinMap(dom, codomain, matrix * (domain.basis().adjoint() * dom.basis()));
  }

  double norm() const { return matrix.norm(); }
};

inline LinMap operator+(const LinMap& f, const LinMap& g) {
  if (!subspace_eq(f.codomain, g.codomain)) throw GeometryError("LinMap sum: codomains differ");
  const LinMap h = g.rebased(f.domain);
  CMatrix m = f.matrix + f.codomain.basis().adjoint() * g.codomain.basis() * h.matrix;
  return LinMap(f.domain, f.codomain, std::move(m));
}

inline LinMap operator*(cplx s, const LinMap& f) { return LinMap(f.domain, f.codomain, s * f.matrix); }

inline LinMap operator-(const LinMap& f, const LinMap& g) { return f + cplx(-1.0) * g; }

/// Γ(f) = {x + f(x)}. Requires domain ∩ codomain = {0}.
inline CSubspace graph_of(const LinMap& f, double tol = default_tolerances().rank) {
  const Index d = f.domain.ambient_dim();
  if (f.codomain.ambient_dim() != d) throw GeometryError("graph_of: ambient mismatch");
  CMatrix both(d, f.domain.dim() + f.codomain.dim());
  both << f.domain.basis(), f.codomain.basis();
  if (numerical_rank(both, tol) != both.cols()) throw GeometryError("not complementary");
  return CSubspace::span_or_zero(f.domain.basis() + f.codomain.basis() * f.matrix, tol);
}

/// Inverse of graph_of for the splitting V = T ⊕ W: returns f with G = Γ(f),
/// f defined on the projection of G to T along W.
inline LinMap graph_decode(const CSubspace& g, const CSubspace& t, const CSubspace& w,
                           double tol = default_tolerances().rank) {
  const Index d = g.ambient_dim();
  if (t.ambient_dim() != d || w.ambient_dim() != d) throw GeometryError("graph_decode: ambient mismatch");
  CMatrix tw(d, t.dim() + w.dim());
  tw << t.basis(), w.basis();
  if (numerical_rank(tw, tol) != tw.cols()) throw GeometryError("not complementary");
  if (g.dim() == 0) return LinMap::zero(CSubspace::zero(d), w);
  const CMatrix coeffs = tw.colPivHouseholderQr().solve(g.basis());
  const CMatrix residual = tw * coeffs - g.basis();
  if (residual.norm() > 1e-8 * std::max<double>(1.0, static_cast<double>(g.dim()))) {
    throw GeometryError("graph_decode: subspace not inside T ⊕ W");
  }
  const CMatrix x = t.basis() * coeffs.topRows(t.dim());
  const CMatrix y = w.basis() * coeffs.bottomRows(w.dim());
  if (numerical_rank(x, tol) != g.dim()) throw GeometryError("graph_decode: subspace meets W");
  CSubspace dom = CSubspace::span_or_zero(x, tol);
  const CMatrix c = dom.basis().adjoint() * x;  // x = B_dom c, c invertible
  CMatrix m = w.basis().adjoint() * y * c.inverse();
  return LinMap(std::move(dom), w, std::move(m));
}

inline double acs_residual(const RMatrix& j) {
  const RMatrix r = j * j + RMatrix::Identity(j.rows(), j.cols());
  return r.norm() / std::max(1.0, j.squaredNorm() / static_cast<double>(std::max<Index>(1, j.rows())));
}

inline void require_acs(const RMatrix& j, const Tolerances& tol = default_tolerances()) {
  if (j.rows() != j.cols() || j.rows() % 2 != 0) throw GeometryError("not an almost complex structure: shape");
  if (j.rows() > 0 && acs_residual(j) >= tol.acs) throw GeometryError("not an almost complex structure");
}

struct EigenSplitting {
  CSubspace plus;   // Eig(J^C, +i)
  CSubspace minus;  // Eig(J^C, -i)
};

/// ±i eigenspaces of the complexification of a real J with J² = −I.
inline EigenSplitting eig_pm_i(const RMatrix& j, const Tolerances& tol = default_tolerances()) {
  require_acs(j, tol);
  const Index d = j.rows();
  const CMatrix jc = j.cast<cplx>();
  const CMatrix id = CMatrix::Identity(d, d);
  EigenSplitting out{CSubspace::span_or_zero(id - kI * jc, tol.rank), CSubspace::span_or_zero(id + kI * jc, tol.rank)};
  if (out.plus.dim() != d / 2 || out.minus.dim() != d / 2) {
    throw GeometryError("not an almost complex structure: eigenspace dimensions");
  }
  return out;
}

}  // namespace acx
