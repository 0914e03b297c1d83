#pragma once

// Exact Chern-class calculus by the splitting principle. Classes are graded
// integer polynomials in named generators, truncated at the base dimension.
// Tensor products and exterior squares are expanded over formal roots and
// rewritten in elementary symmetric polynomials by leading-term elimination.

#include <algorithm>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace acx {

class ChernError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

inline std::int64_t checked_add(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_add_overflow(a, b, &r)) throw ChernError("integer overflow in coefficient");
  return r;
}
inline std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_mul_overflow(a, b, &r)) throw ChernError("integer overflow in coefficient");
  return r;
}

}  // namespace detail

/// Integer polynomial in named graded generators, truncated above `trunc`.
class GradedPoly {
 public:
  using Monomial = std::map<std::string, int>;  // generator -> exponent

  explicit GradedPoly(int trunc = 0) : trunc_(trunc) {
    if (trunc < 0) throw ChernError("negative truncation degree");
  }

  static GradedPoly constant(std::int64_t c, int trunc) {
    GradedPoly p(trunc);
    p.add_term({}, c);
    return p;
  }
  static GradedPoly generator(const std::string& name, int degree, int trunc) {
    if (degree < 1) throw ChernError("generator degree must be positive: " + name);
    GradedPoly p(trunc);
    p.degrees_[name] = degree;
    p.add_term({{name, 1}}, 1);
    return p;
  }

  int truncation() const { return trunc_; }
  const std::map<Monomial, std::int64_t>& terms() const { return terms_; }
  const std::map<std::string, int>& degrees() const { return degrees_; }
  bool is_zero() const { return terms_.empty(); }

  int degree_of(const Monomial& m) const {
    int d = 0;
    for (const auto& [g, e] : m) d += e * degrees_.at(g);
    return d;
  }

  std::int64_t coefficient(const Monomial& m) const {
    const auto it = terms_.find(m);
    return it == terms_.end() ? 0 : it->second;
  }

  /// Part of exact degree `deg`.
  GradedPoly homogeneous(int deg) const {
    GradedPoly p(trunc_);
    p.degrees_ = degrees_;
    for (const auto& [m, c] : terms_)
      if (degree_of(m) == deg) p.terms_[m] = c;
    return p;
  }

  bool is_homogeneous(int deg) const {
    for (const auto& [m, c] : terms_)
      if (degree_of(m) != deg) return false;
    return true;
  }

  /// True iff some term contains the generator.
  bool mentions(const std::string& g) const {
    for (const auto& [m, c] : terms_)
      if (m.count(g)) return true;
    return false;
  }

  GradedPoly truncated(int trunc) const {
    GradedPoly p(trunc);
    p.degrees_ = degrees_;
    for (const auto& [m, c] : terms_)
      if (degree_of(m) <= trunc) p.terms_[m] = c;
    return p;
  }

  friend GradedPoly operator+(const GradedPoly& a, const GradedPoly& b) {
    GradedPoly r = a.merged_with(b);
    for (const auto& [m, c] : b.terms_) r.add_term(m, c);
    return r;
  }
  friend GradedPoly operator-(const GradedPoly& a) {
    GradedPoly r(a.trunc_);
    r.degrees_ = a.degrees_;
    for (const auto& [m, c] : a.terms_) r.add_term(m, detail::checked_mul(c, -1));
    return r;
  }
  friend GradedPoly operator-(const GradedPoly& a, const GradedPoly& b) { return a + (-b); }
  friend GradedPoly operator*(std::int64_t s, const GradedPoly& a) {
    GradedPoly r(a.trunc_);
    r.degrees_ = a.degrees_;
    for (const auto& [m, c] : a.terms_) r.add_term(m, detail::checked_mul(s, c));
    return r;
  }
  friend GradedPoly operator*(const GradedPoly& a, const GradedPoly& b) {
    GradedPoly r = a.merged_with(b);
    GradedPoly r0(r.trunc_);
    r0.degrees_ = r.degrees_;
    for (const auto& [ma, ca] : a.terms_) {
      const int da = r.degree_of(ma);
      for (const auto& [mb, cb] : b.terms_) {
        if (da + r.degree_of(mb) > r.trunc_) continue;
        Monomial m = ma;
        for (const auto& [g, e] : mb) m[g] += e;
        r0.add_term(m, detail::checked_mul(ca, cb));
      }
    }
    return r0;
  }

  GradedPoly pow(int e) const {
    GradedPoly r = constant(1, trunc_);
    r.degrees_ = degrees_;
    for (int i = 0; i < e; ++i) r = r * *this;
    return r;
  }

  bool operator==(const GradedPoly& o) const { return terms_ == o.terms_; }

  /// Deterministic text: terms by descending degree, then by monomial.
  std::string to_string() const {
    if (terms_.empty()) return "0";
    std::vector<std::pair<int, const std::pair<const Monomial, std::int64_t>*>> order;
    for (const auto& t : terms_) order.push_back({degree_of(t.first), &t});
    std::stable_sort(order.begin(), order.end(), [](const auto& x, const auto& y) { return x.first > y.first; });
    std::string out;
    bool first = true;
    for (const auto& [deg, t] : order) {
      std::int64_t c = t->second;
      const bool neg = c < 0;
      if (neg) c = -c;
      out += first ? (neg ? "-" : "") : (neg ? " - " : " + ");
      first = false;
      std::string mono;
      for (const auto& [g, e] : t->first) {
        if (!mono.empty()) mono += "*";
        mono += g;
        if (e > 1) mono += "^" + std::to_string(e);
      }
      if (mono.empty()) {
        out += std::to_string(c);
      } else {
        if (c != 1) out += std::to_string(c) + "*";
        out += mono;
      }
    }
    return out;
  }

 private:
  GradedPoly merged_with(const GradedPoly& b) const {
    if (b.trunc_ != trunc_) throw ChernError("truncation degrees differ");
    GradedPoly r = *this;
    for (const auto& [g, d] : b.degrees_) {
      auto [it, fresh] = r.degrees_.emplace(g, d);
      if (!fresh && it->second != d) throw ChernError("generator " + g + " used with two degrees");
    }
    return r;
  }

  void add_term(const Monomial& m, std::int64_t c) {
    if (c == 0 || degree_of(m) > trunc_) return;
    auto& slot = terms_[m];
    slot = detail::checked_add(slot, c);
    if (slot == 0) terms_.erase(m);
  }

  int trunc_;
  std::map<Monomial, std::int64_t> terms_;
  std::map<std::string, int> degrees_;
};

/// Formal bundle: rank and c_1..c_d (c_j of degree j), d = truncation degree.
struct BundleSymbol {
  int rank = 0;
  int trunc = 0;
  std::vector<GradedPoly> c;  // c[j-1] = c_j

  const GradedPoly& chern(int j) const { return c.at(j - 1); }

  /// c = [c_1, ..., c_d]; classes past the rank must vanish.
  static BundleSymbol make(int rank, int trunc, std::vector<GradedPoly> classes) {
    if (rank < 0) throw ChernError("negative rank");
    if (static_cast<int>(classes.size()) > trunc) throw ChernError("more classes than the truncation degree");
    for (auto& p : classes)
      if (p.truncation() != trunc) p = p.truncated(trunc);
    while (static_cast<int>(classes.size()) < trunc) classes.emplace_back(trunc);
    for (int j = 1; j <= trunc; ++j) {
      if (!classes[j - 1].is_homogeneous(j)) throw ChernError("c_" + std::to_string(j) + " is not of degree " + std::to_string(j));
      if (j > rank && !classes[j - 1].is_zero()) throw ChernError("c_" + std::to_string(j) + " must vanish above the rank");
    }
    return {rank, trunc, std::move(classes)};
  }

  /// Rank-r bundle with free generators c1(name)..c_min(r,d)(name).
  static BundleSymbol generic(const std::string& name, int rank, int trunc) {
    std::vector<GradedPoly> cl;
    for (int j = 1; j <= trunc; ++j)
      cl.push_back(j <= rank ? GradedPoly::generator("c" + std::to_string(j) + "(" + name + ")", j, trunc)
                             : GradedPoly(trunc));
    return make(rank, trunc, std::move(cl));
  }

  static BundleSymbol trivial(int rank, int trunc) { return make(rank, trunc, {}); }

  /// 1 + c_1 + ... + c_d.
  GradedPoly total() const {
    GradedPoly t = GradedPoly::constant(1, trunc);
    for (const auto& p : c) t = t + p;
    return t;
  }
};

inline constexpr int kMaxSplitRank = 6;

namespace detail {

// Polynomial in formal roots, exponent vectors over all root variables.
struct RootPoly {
  int trunc = 0;
  std::map<std::vector<int>, std::int64_t> t;

  static int deg(const std::vector<int>& e) {
    int d = 0;
    for (int x : e) d += x;
    return d;
  }
  void add(const std::vector<int>& e, std::int64_t c) {
    if (c == 0 || deg(e) > trunc) return;
    auto& s = t[e];
    s = checked_add(s, c);
    if (s == 0) t.erase(e);
  }
  RootPoly operator*(const RootPoly& o) const {
    RootPoly r{trunc, {}};
    for (const auto& [ea, ca] : t)
      for (const auto& [eb, cb] : o.t) {
        if (deg(ea) + deg(eb) > trunc) continue;
        std::vector<int> e(ea.size());
        for (std::size_t i = 0; i < e.size(); ++i) e[i] = ea[i] + eb[i];
        r.add(e, checked_mul(ca, cb));
      }
    return r;
  }
};

inline RootPoly root_one(int nvars, int trunc) {
  RootPoly p{trunc, {}};
  p.add(std::vector<int>(nvars, 0), 1);
  return p;
}

// Elementary symmetric e_r of the variables [first, first+count).
inline RootPoly elementary(int nvars, int first, int count, int r, int trunc) {
  RootPoly p{trunc, {}};
  if (r > count) return p;
  std::vector<int> pick(count, 0);
  std::fill(pick.end() - r, pick.end(), 1);
  do {
    std::vector<int> e(nvars, 0);
    for (int i = 0; i < count; ++i) e[first + i] = pick[i];
    p.add(e, 1);
  } while (std::next_permutation(pick.begin(), pick.end()));
  return p;
}

/// Computes the Chern classes of the bundle whose roots are the given integer
/// linear forms in the roots of `inputs`, then rewrites them in the inputs'
/// classes.
inline BundleSymbol split_compute(const std::vector<BundleSymbol>& inputs,
                                  const std::vector<std::vector<int>>& new_roots) {
  if (inputs.empty()) throw ChernError("no input bundles");
  const int trunc = inputs.front().trunc;
  std::vector<int> first;
  int nvars = 0;
  for (const auto& b : inputs) {
    if (b.trunc != trunc) throw ChernError("bundles have different truncation degrees");
    if (b.rank > kMaxSplitRank) throw ChernError("rank " + std::to_string(b.rank) + " exceeds the root-expansion cap");
    first.push_back(nvars);
    nvars += b.rank;
  }
  RootPoly total = root_one(nvars, trunc);
  for (const auto& form : new_roots) {
    RootPoly f = root_one(nvars, trunc);
    for (int v = 0; v < nvars; ++v) {
      std::vector<int> e(nvars, 0);
      e[v] = 1;
      f.add(e, form.at(v));
    }
    total = total * f;
  }
  // Cache elementary polynomials per block.
  std::vector<std::vector<RootPoly>> elem(inputs.size());
  for (std::size_t b = 0; b < inputs.size(); ++b)
    for (int r = 0; r <= inputs[b].rank; ++r) elem[b].push_back(elementary(nvars, first[b], inputs[b].rank, r, trunc));

  std::vector<GradedPoly> classes;
  for (int j = 1; j <= trunc; ++j) {
    RootPoly rest{trunc, {}};
    for (const auto& [e, c] : total.t)
      if (RootPoly::deg(e) == j) rest.t[e] = c;
    GradedPoly out(trunc);
    while (!rest.t.empty()) {
      const auto lead = std::prev(rest.t.end());  // lexicographically largest
      const std::vector<int> e = lead->first;
      const std::int64_t coeff = lead->second;
      RootPoly sub = root_one(nvars, trunc);
      GradedPoly term = GradedPoly::constant(coeff, trunc);
      for (std::size_t b = 0; b < inputs.size(); ++b) {
        const int m = inputs[b].rank;
        for (int i = 0; i < m; ++i) {
          const int cur = e[first[b] + i], next = i + 1 < m ? e[first[b] + i + 1] : 0;
          if (cur < next) throw ChernError("internal: expression is not symmetric in the roots");
          for (int p = 0; p < cur - next; ++p) {
            sub = sub * elem[b][i + 1];
            term = term * inputs[b].chern(i + 1);
          }
        }
      }
      for (const auto& [se, sc] : sub.t) rest.add(se, checked_mul(-coeff, sc));
      out = out + term;
    }
    classes.push_back(out);
  }
  int rank = static_cast<int>(new_roots.size());
  for (int j = rank + 1; j <= trunc; ++j)
    if (!classes[j - 1].is_zero()) throw ChernError("internal: class above the rank");
  return BundleSymbol::make(rank, trunc, std::move(classes));
}

}  // namespace detail

/// c_k ↦ (−1)^k c_k. Used for both the conjugate and the dual bundle.
inline BundleSymbol conj_or_dual(const BundleSymbol& e) {
  BundleSymbol r = e;
  for (int j = 1; j <= e.trunc; ++j)
    if (j % 2 == 1) r.c[j - 1] = -e.c[j - 1];
  return r;
}
inline BundleSymbol chern_conj(const BundleSymbol& e) { return conj_or_dual(e); }
inline BundleSymbol chern_dual(const BundleSymbol& e) { return conj_or_dual(e); }

/// Roots α_i + β_j.
inline BundleSymbol chern_tensor(const BundleSymbol& e, const BundleSymbol& v) {
  std::vector<std::vector<int>> roots;
  for (int i = 0; i < e.rank; ++i)
    for (int j = 0; j < v.rank; ++j) {
      std::vector<int> f(e.rank + v.rank, 0);
      f[i] = 1;
      f[e.rank + j] = 1;
      roots.push_back(std::move(f));
    }
  return detail::split_compute({e, v}, roots);
}

/// Roots α_i + α_j, i < j.
inline BundleSymbol chern_lambda2(const BundleSymbol& e) {
  std::vector<std::vector<int>> roots;
  for (int i = 0; i < e.rank; ++i)
    for (int j = i + 1; j < e.rank; ++j) {
      std::vector<int> f(e.rank, 0);
      f[i] = f[j] = 1;
      roots.push_back(std::move(f));
    }
  return detail::split_compute({e}, roots);
}

/// Whitney sum through the root engine (roots α ∪ β).
inline BundleSymbol chern_sum(const BundleSymbol& e, const BundleSymbol& v) {
  std::vector<std::vector<int>> roots;
  for (int i = 0; i < e.rank + v.rank; ++i) {
    std::vector<int> f(e.rank + v.rank, 0);
    f[i] = 1;
    roots.push_back(std::move(f));
  }
  return detail::split_compute({e, v}, roots);
}

struct S6ChernResult {
  GradedPoly c3;           // c_3(Λ²(T̄*) ⊗ T)
  GradedPoly lambda_part;  // 3·c_3(Λ²T̄*)
  GradedPoly tangent_part; // 3·c_3(T)
};

/// T of rank 3 on S⁶ with c = (0, 0, t) and degree cap 3.
inline S6ChernResult s6_c3_vanishing(bool with_top_class = true) {
  const int d = 3;
  const GradedPoly t = with_top_class ? GradedPoly::generator("t", 3, d) : GradedPoly(d);
  const BundleSymbol tb = BundleSymbol::make(3, d, {GradedPoly(d), GradedPoly(d), t});
  const BundleSymbol l2 = chern_lambda2(chern_conj(chern_dual(tb)));
  const BundleSymbol prod = chern_tensor(l2, tb);
  return {prod.chern(3), tb.rank * l2.chern(3), l2.rank * tb.chern(3)};
}

}  // namespace acx
