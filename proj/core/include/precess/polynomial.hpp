#pragma once

#include <array>
#include <cstddef>
#include <map>
#include <stdexcept>
#include <utility>

namespace precess {

/// Exponent triple (i, j, k) of the monomial x^i y^j z^k.
using Exponent = std::array<int, 3>;

constexpr int total_degree(const Exponent& e) { return e[0] + e[1] + e[2]; }

/// Graded lexicographic order: total degree first, then x > y > z.
struct GrLex {
  bool operator()(const Exponent& lhs, const Exponent& rhs) const {
    const int dl = total_degree(lhs);
    const int dr = total_degree(rhs);
    if (dl != dr) return dl < dr;
    return lhs < rhs;
  }
};

/// Numeric conversion that also covers GMP rationals (via get_d()).
template <class U, class T>
U coefficient_cast(const T& c) {
  if constexpr (requires { c.get_d(); }) {
    return static_cast<U>(c.get_d());
  } else {
    return static_cast<U>(c);
  }
}

/// Sparse trivariate polynomial. Zero coefficients are never stored, so
/// degree() and is_zero() are exact for exact coefficient types.
template <class T>
class Polynomial {
 public:
  using Coefficient = T;
  using TermMap = std::map<Exponent, T, GrLex>;

  Polynomial() = default;

  static Polynomial constant(const T& c) { return monomial({0, 0, 0}, c); }
  static Polynomial monomial(const Exponent& e, const T& c) {
    Polynomial p;
    p.add_term(e, c);
    return p;
  }
  /// x, y or z.
  static Polynomial coordinate(int axis) {
    Exponent e{0, 0, 0};
    e[static_cast<std::size_t>(axis)] = 1;
    return monomial(e, T(1));
  }

  const TermMap& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }

  /// -1 for the zero polynomial.
  int degree() const { return terms_.empty() ? -1 : total_degree(terms_.rbegin()->first); }

  T coefficient(const Exponent& e) const {
    auto it = terms_.find(e);
    return it == terms_.end() ? T(0) : it->second;
  }

  void add_term(const Exponent& e, const T& c) {
    if (c == T(0)) return;
    auto [it, inserted] = terms_.try_emplace(e, c);
    if (!inserted) {
      it->second += c;
      if (it->second == T(0)) terms_.erase(it);
    }
  }

  Polynomial& operator+=(const Polynomial& rhs) {
    for (const auto& [e, c] : rhs.terms_) add_term(e, c);
    return *this;
  }
  Polynomial& operator-=(const Polynomial& rhs) {
    for (const auto& [e, c] : rhs.terms_) add_term(e, T(-c));
    return *this;
  }
  Polynomial& operator*=(const T& s) {
    if (s == T(0)) {
      terms_.clear();
      return *this;
    }
    for (auto it = terms_.begin(); it != terms_.end();) {
      it->second *= s;
      if (it->second == T(0)) {
        it = terms_.erase(it);
      } else {
        ++it;
      }
    }
    return *this;
  }

  friend Polynomial operator+(Polynomial lhs, const Polynomial& rhs) { return lhs += rhs; }
  friend Polynomial operator-(Polynomial lhs, const Polynomial& rhs) { return lhs -= rhs; }
  friend Polynomial operator-(Polynomial p) { return p *= T(-1); }
  friend Polynomial operator*(Polynomial p, const T& s) { return p *= s; }
  friend Polynomial operator*(const T& s, Polynomial p) { return p *= s; }

  friend Polynomial operator*(const Polynomial& lhs, const Polynomial& rhs) {
    Polynomial out;
    for (const auto& [el, cl] : lhs.terms_) {
      for (const auto& [er, cr] : rhs.terms_) {
        out.add_term({el[0] + er[0], el[1] + er[1], el[2] + er[2]}, T(cl * cr));
      }
    }
    return out;
  }

  friend bool operator==(const Polynomial& lhs, const Polynomial& rhs) {
    return lhs.terms_ == rhs.terms_;
  }

  Polynomial derivative(int axis) const {
    Polynomial out;
    const auto a = static_cast<std::size_t>(axis);
    for (const auto& [e, c] : terms_) {
      if (e[a] == 0) continue;
      Exponent d = e;
      --d[a];
      out.add_term(d, T(c * T(e[a])));
    }
    return out;
  }

  template <class U>
  U evaluate(U x, U y, U z) const {
    U sum = U(0);
    for (const auto& [e, c] : terms_) {
      U term = coefficient_cast<U>(c);
      for (int i = 0; i < e[0]; ++i) term *= x;
      for (int i = 0; i < e[1]; ++i) term *= y;
      for (int i = 0; i < e[2]; ++i) term *= z;
      sum += term;
    }
    return sum;
  }

  /// Coefficient-wise conversion through `convert`.
  template <class U, class F>
  Polynomial<U> map(F&& convert) const {
    Polynomial<U> out;
    for (const auto& [e, c] : terms_) out.add_term(e, convert(c));
    return out;
  }

 private:
  TermMap terms_;
};

/// Remainder of `p` on division by `divisor` in graded lex order. For a
/// single divisor the remainder vanishes iff divisor | p, which makes this an
/// exact divisibility test over an exact field.
template <class T>
Polynomial<T> division_remainder(Polynomial<T> p, const Polynomial<T>& divisor) {
  if (divisor.is_zero()) throw std::invalid_argument("division by the zero polynomial");
  const auto& [lead_exp, lead_coef] = *divisor.terms().rbegin();
  Polynomial<T> remainder;
  while (!p.is_zero()) {
    const auto [e, c] = *p.terms().rbegin();
    const bool divisible = e[0] >= lead_exp[0] && e[1] >= lead_exp[1] && e[2] >= lead_exp[2];
    if (divisible) {
      const Exponent shift{e[0] - lead_exp[0], e[1] - lead_exp[1], e[2] - lead_exp[2]};
      p -= Polynomial<T>::monomial(shift, T(c / lead_coef)) * divisor;
    } else {
      remainder.add_term(e, c);
      p.add_term(e, T(-c));
    }
  }
  return remainder;
}

}  // namespace precess
