#include "precess/rational.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace precess {

Rational rationalize(double x, double rel_tol) {
  if (!std::isfinite(x)) throw std::invalid_argument("rationalize: non-finite input");
  if (x == 0.0) return Rational(0);

  const Rational exact(x);
  const Rational target = abs(exact);
  const double limit = rel_tol * std::abs(x);

  // Convergents h/k of the continued fraction of |x|.
  mpz_class h_prev = 1, h = 0, k_prev = 0, k = 1;
  Rational rest = target;
  for (int iter = 0; iter < 64; ++iter) {
    mpz_class a = rest.get_num() / rest.get_den();
    mpz_class h_next = a * h_prev + h;
    mpz_class k_next = a * k_prev + k;
    h = h_prev;
    k = k_prev;
    h_prev = h_next;
    k_prev = k_next;

    Rational convergent(h_prev, k_prev);
    convergent.canonicalize();
    if (std::abs(Rational(convergent - target).get_d()) <= limit) {
      return sgn(exact) < 0 ? Rational(-convergent) : convergent;
    }
    if (mpz_sizeinbase(k_prev.get_mpz_t(), 2) > 53) break;

    Rational frac = rest - Rational(a);
    if (frac == 0) break;
    rest = 1 / frac;
  }
  return exact;
}

namespace {

// |z| < 2^128 assumed; converted limb by limb so no bits are lost before the
// final rounding.
long double mpz_to_long_double(const mpz_class& z) {
  mpz_class v = abs(z);
  long double out = 0.0L;
  long double scale = 1.0L;
  while (v != 0) {
    mpz_class low = v % (mpz_class(1) << 32);
    out += scale * static_cast<long double>(low.get_ui());
    v >>= 32;
    scale *= 4294967296.0L;
  }
  return sgn(z) < 0 ? -out : out;
}

}  // namespace

long double to_long_double(const Rational& q) {
  if (q == 0) return 0.0L;
  const mpz_class& num = q.get_num();
  const mpz_class& den = q.get_den();
  const long num_bits = static_cast<long>(mpz_sizeinbase(num.get_mpz_t(), 2));
  const long den_bits = static_cast<long>(mpz_sizeinbase(den.get_mpz_t(), 2));
  // Scale so the integer quotient carries ~96 significant bits.
  const long shift = 96 - (num_bits - den_bits);
  mpz_class scaled_num = abs(num);
  mpz_class scaled_den = den;
  if (shift >= 0) {
    scaled_num <<= static_cast<mp_bitcnt_t>(shift);
  } else {
    scaled_den <<= static_cast<mp_bitcnt_t>(-shift);
  }
  mpz_class quotient = scaled_num / scaled_den;
  long double value = std::ldexp(mpz_to_long_double(quotient), static_cast<int>(-shift));
  return sgn(num) < 0 ? -value : value;
}

Rational parse_rational(std::string_view text) {
  std::string s(text);
  if (s.empty()) throw std::invalid_argument("empty rational literal");
  if (auto slash = s.find('/'); slash != std::string::npos) {
    Rational out;
    try {
      out = Rational(mpz_class(s.substr(0, slash), 10), mpz_class(s.substr(slash + 1), 10));
    } catch (const std::exception&) {
      throw std::invalid_argument("malformed rational literal '" + s + "'");
    }
    if (out.get_den() == 0) throw std::invalid_argument("zero denominator in '" + s + "'");
    out.canonicalize();
    return out;
  }

  std::size_t pos = 0;
  bool negative = false;
  if (s[pos] == '+' || s[pos] == '-') negative = s[pos++] == '-';
  std::string digits;
  long exponent = 0;
  bool seen_dot = false;
  bool seen_digit = false;
  for (; pos < s.size(); ++pos) {
    const char ch = s[pos];
    if (ch >= '0' && ch <= '9') {
      digits.push_back(ch);
      seen_digit = true;
      if (seen_dot) --exponent;
    } else if (ch == '.' && !seen_dot) {
      seen_dot = true;
    } else {
      break;
    }
  }
  if (!seen_digit) throw std::invalid_argument("malformed decimal literal '" + s + "'");
  if (pos < s.size()) {
    if (s[pos] != 'e' && s[pos] != 'E') {
      throw std::invalid_argument("malformed decimal literal '" + s + "'");
    }
    const std::string exp_text = s.substr(pos + 1);
    std::size_t used = 0;
    long e = 0;
    try {
      e = std::stol(exp_text, &used);
    } catch (const std::exception&) {
      throw std::invalid_argument("malformed exponent in '" + s + "'");
    }
    if (used != exp_text.size()) throw std::invalid_argument("malformed exponent in '" + s + "'");
    exponent += e;
  }

  Rational out{mpz_class(digits, 10)};
  mpz_class ten_power;
  mpz_ui_pow_ui(ten_power.get_mpz_t(), 10, static_cast<unsigned long>(std::labs(exponent)));
  if (exponent >= 0) {
    out *= Rational(ten_power);
  } else {
    out /= Rational(ten_power);
  }
  out.canonicalize();
  return negative ? Rational(-out) : out;
}

std::string to_string(const Rational& q) {
  Rational c = q;
  c.canonicalize();
  return c.get_str();
}

}  // namespace precess
