#pragma once

// Octonions by Cayley–Dickson doubling of the quaternions,
//   (a, b)(c, d) = (ac − d̄b, da + b c̄),
// with e0..e3 the quaternion units and e4..e7 = (0, e0..e3). On the unit
// imaginary sphere S⁶ the almost complex structure is J(u)ζ = ζu.

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <stdexcept>

namespace acx {

class Octonion {
 public:
  using Coeffs = std::array<double, 8>;

  Octonion() : c_{} {}
  explicit Octonion(const Coeffs& c) : c_(c) {}

  static Octonion unit(int j) {
    if (j < 0 || j > 7) throw std::out_of_range("octonion unit index");
    Octonion o;
    o.c_[j] = 1.0;
    return o;
  }
  static Octonion from_vector(const Eigen::VectorXd& v) {
    if (v.size() != 8) throw std::invalid_argument("octonion needs 8 coefficients");
    Octonion o;
    for (int i = 0; i < 8; ++i) o.c_[i] = v(i);
    return o;
  }

  double operator[](int i) const { return c_[i]; }
  double& operator[](int i) { return c_[i]; }
  const Coeffs& coeffs() const { return c_; }

  Eigen::VectorXd vec() const {
    Eigen::VectorXd v(8);
    for (int i = 0; i < 8; ++i) v(i) = c_[i];
    return v;
  }

  double re() const { return c_[0]; }
  Octonion conj() const {
    Octonion o = *this;
    for (int i = 1; i < 8; ++i) o.c_[i] = -o.c_[i];
    return o;
  }
  double norm() const { return vec().norm(); }

  friend Octonion operator+(Octonion a, const Octonion& b) {
    for (int i = 0; i < 8; ++i) a.c_[i] += b.c_[i];
    return a;
  }
  friend Octonion operator-(Octonion a, const Octonion& b) {
    for (int i = 0; i < 8; ++i) a.c_[i] -= b.c_[i];
    return a;
  }
  friend Octonion operator*(double s, Octonion a) {
    for (double& x : a.c_) x *= s;
    return a;
  }
  friend Octonion operator*(const Octonion& x, const Octonion& y);

 private:
  Coeffs c_;
};

namespace detail {

using Quat = std::array<double, 4>;

inline Quat qmul(const Quat& a, const Quat& b) {
  return {a[0] * b[0] - a[1] * b[1] - a[2] * b[2] - a[3] * b[3], a[0] * b[1] + a[1] * b[0] + a[2] * b[3] - a[3] * b[2],
          a[0] * b[2] - a[1] * b[3] + a[2] * b[0] + a[3] * b[1], a[0] * b[3] + a[1] * b[2] - a[2] * b[1] + a[3] * b[0]};
}
inline Quat qconj(const Quat& a) { return {a[0], -a[1], -a[2], -a[3]}; }

}  // namespace detail

inline Octonion operator*(const Octonion& x, const Octonion& y) {
  using detail::Quat;
  const Quat a{x[0], x[1], x[2], x[3]}, b{x[4], x[5], x[6], x[7]};
  const Quat c{y[0], y[1], y[2], y[3]}, d{y[4], y[5], y[6], y[7]};
  const Quat l1 = detail::qmul(a, c), l2 = detail::qmul(detail::qconj(d), b);
  const Quat r1 = detail::qmul(d, a), r2 = detail::qmul(b, detail::qconj(c));
  Octonion o;
  for (int i = 0; i < 4; ++i) {
    o[i] = l1[i] - l2[i];
    o[4 + i] = r1[i] + r2[i];
  }
  return o;
}

inline Octonion mul(const Octonion& a, const Octonion& b) { return a * b; }

/// ⟨u, v⟩ = Re(u v̄).
inline double inner(const Octonion& u, const Octonion& v) { return (u * v.conj()).re(); }

inline Octonion associator(const Octonion& a, const Octonion& b, const Octonion& c) { return (a * b) * c - a * (b * c); }

inline constexpr double kTangentTol = 1e-10;

inline void require_s6(const Octonion& u) {
  if (std::abs(u.re()) > kTangentTol || std::abs(u.norm() - 1.0) > kTangentTol) {
    throw std::invalid_argument("not a unit imaginary octonion");
  }
}

inline bool is_tangent(const Octonion& u, const Octonion& z, double tol = kTangentTol) {
  const double scale = std::max(1.0, z.norm());
  return std::abs(z.re()) <= tol * scale && std::abs(inner(z, u)) <= tol * scale;
}

inline void require_tangent(const Octonion& u, const Octonion& z) {
  if (!is_tangent(u, z)) throw std::invalid_argument("vector not tangent to S^6 at u");
}

/// Orthogonal projection onto T_u S⁶ (explicit; never applied implicitly).
inline Octonion project_tangent(const Octonion& u, Octonion z) {
  z[0] = 0.0;
  return z - inner(z, u) * u;
}

/// J(u)ζ = ζu.
inline Octonion J_O(const Octonion& u, const Octonion& z) {
  require_s6(u);
  require_tangent(u, z);
  return z * u;
}

/// N(u)(ζ,η) = (ζ(ηu) − (ζη)u) − (η(ζu) − (ηζ)u).
inline Octonion nijenhuis(const Octonion& u, const Octonion& z, const Octonion& e) {
  require_s6(u);
  require_tangent(u, z);
  require_tangent(u, e);
  return (z * (e * u) - (z * e) * u) - (e * (z * u) - (e * z) * u);
}

}  // namespace acx
