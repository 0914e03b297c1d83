#pragma once

// Text front end for the Chern calculus.
//
//   expr  := NAME | op '(' expr ')' | bin '(' expr ',' expr ')'
//   op    := conj | dual | lambda2
//   bin   := tensor | sum
//   decl  := NAME ':' 'rank' '=' INT [ ',' 'c' '=' '[' poly (',' poly)* ']' ]
//   poly  := integer polynomial in identifiers with + - * ^ and parentheses
//
// An identifier standing alone as the j-th class becomes a generator of
// degree j; other identifiers must already have a degree. Without a class
// list the bundle gets free generators c1(NAME), c2(NAME), ...

#include "acx/chern.hpp"

#include <cctype>
#include <map>
#include <string>
#include <string_view>

namespace acx {

namespace detail {

class Cursor {
 public:
  explicit Cursor(std::string_view s) : s_(s) {}

  void skip() {
    while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
  }
  bool done() {
    skip();
    return i_ >= s_.size();
  }
  char peek() {
    skip();
    return i_ < s_.size() ? s_[i_] : '\0';
  }
  bool accept(char c) {
    if (peek() != c) return false;
    ++i_;
    return true;
  }
  void expect(char c) {
    if (!accept(c)) fail(std::string("expected '") + c + "'");
  }
  std::string ident() {
    skip();
    const std::size_t b = i_;
    while (i_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[i_])) || s_[i_] == '_')) ++i_;
    if (b == i_ || std::isdigit(static_cast<unsigned char>(s_[b]))) fail("expected a name");
    return std::string(s_.substr(b, i_ - b));
  }
  std::int64_t integer() {
    skip();
    const std::size_t b = i_;
    std::int64_t v = 0;
    while (i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_]))) {
      v = checked_add(checked_mul(v, 10), s_[i_] - '0');
      ++i_;
    }
    if (b == i_) fail("expected an integer");
    return v;
  }
  std::size_t pos() const { return i_; }
  void rewind(std::size_t p) { i_ = p; }
  [[noreturn]] void fail(const std::string& what) const {
    throw ChernError("parse error at " + std::to_string(i_) + ": " + what + " in \"" + std::string(s_) + "\"");
  }

 private:
  std::string_view s_;
  std::size_t i_ = 0;
};

struct PolyParser {
  Cursor& cur;
  int trunc;
  std::map<std::string, int>& degrees;

  GradedPoly expr() {
    GradedPoly acc(trunc);
    bool neg = cur.accept('-');
    if (!neg) cur.accept('+');
    for (;;) {
      GradedPoly t = term();
      acc = neg ? acc - t : acc + t;
      if (cur.accept('+')) neg = false;
      else if (cur.accept('-')) neg = true;
      else return acc;
    }
  }
  GradedPoly term() {
    GradedPoly acc = factor();
    while (cur.accept('*')) acc = acc * factor();
    return acc;
  }
  GradedPoly factor() {
    GradedPoly base(trunc);
    if (cur.accept('(')) {
      base = expr();
      cur.expect(')');
    } else if (std::isdigit(static_cast<unsigned char>(cur.peek()))) {
      base = GradedPoly::constant(cur.integer(), trunc);
    } else {
      const std::string g = cur.ident();
      const auto it = degrees.find(g);
      if (it == degrees.end()) cur.fail("generator '" + g + "' has no degree");
      base = GradedPoly::generator(g, it->second, trunc);
    }
    if (cur.accept('^')) base = base.pow(static_cast<int>(cur.integer()));
    return base;
  }
};

}  // namespace detail

/// Parses "NAME: rank=R, c=[...]" and returns (NAME, bundle).
inline std::pair<std::string, BundleSymbol> parse_bundle(const std::string& text, int trunc,
                                                         std::map<std::string, int>& degrees) {
  detail::Cursor cur(text);
  const std::string name = cur.ident();
  cur.expect(':');
  if (cur.ident() != "rank") cur.fail("expected 'rank'");
  cur.expect('=');
  const int rank = static_cast<int>(cur.integer());
  if (!cur.accept(',')) {
    if (!cur.done()) cur.fail("trailing input");
    return {name, BundleSymbol::generic(name, rank, trunc)};
  }
  if (cur.ident() != "c") cur.fail("expected 'c'");
  cur.expect('=');
  cur.expect('[');
  std::vector<GradedPoly> classes;
  if (!cur.accept(']')) {
    do {
      const int j = static_cast<int>(classes.size()) + 1;
      // A lone identifier defines a generator of degree j.
      const std::size_t mark = cur.pos();
      if (std::isalpha(static_cast<unsigned char>(cur.peek()))) {
        const std::string g = cur.ident();
        const char next = cur.peek();
        if (next == ',' || next == ']') {
          auto [it, fresh] = degrees.emplace(g, j);
          if (!fresh && it->second != j) cur.fail("generator '" + g + "' reused with another degree");
          classes.push_back(j <= trunc ? GradedPoly::generator(g, j, trunc) : GradedPoly(trunc));
          continue;
        }
        cur.rewind(mark);
      }
      detail::PolyParser pp{cur, trunc, degrees};
      GradedPoly p = pp.expr();
      if (j <= trunc) classes.push_back(p);
      else classes.emplace_back(trunc);
    } while (cur.accept(','));
    cur.expect(']');
  }
  if (!cur.done()) cur.fail("trailing input");
  if (static_cast<int>(classes.size()) > trunc) classes.resize(trunc, GradedPoly(trunc));
  return {name, BundleSymbol::make(rank, trunc, std::move(classes))};
}

/// Evaluates a bundle expression over the declared bundles.
inline BundleSymbol eval_bundle_expr(const std::string& text, const std::map<std::string, BundleSymbol>& env) {
  detail::Cursor cur(text);
  auto rec = [&](auto&& self) -> BundleSymbol {
    const std::string id = cur.ident();
    if (!cur.accept('(')) {
      const auto it = env.find(id);
      if (it == env.end()) cur.fail("unknown bundle '" + id + "'");
      return it->second;
    }
    BundleSymbol a = self(self);
    if (id == "tensor" || id == "sum") {
      cur.expect(',');
      BundleSymbol b = self(self);
      cur.expect(')');
      return id == "tensor" ? chern_tensor(a, b) : chern_sum(a, b);
    }
    cur.expect(')');
    if (id == "conj") return chern_conj(a);
    if (id == "dual") return chern_dual(a);
    if (id == "lambda2") return chern_lambda2(a);
    cur.fail("unknown operation '" + id + "'");
  };
  BundleSymbol out = rec(rec);
  if (!cur.done()) cur.fail("trailing input");
  return out;
}

}  // namespace acx
