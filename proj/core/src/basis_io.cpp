#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "precess/basis.hpp"

namespace precess {

namespace {

constexpr const char* kFormatTag = "precess-basis 1";

// Smallest positive multiple of f with coprime integer coefficients.
RationalField integer_scaled(const RationalField& f) {
  mpz_class lcm = 1;
  mpz_class gcd = 0;
  for (int a = 0; a < 3; ++a) {
    for (const auto& [e, c] : f[a].terms()) {
      mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), c.get_den_mpz_t());
      mpz_gcd(gcd.get_mpz_t(), gcd.get_mpz_t(), c.get_num_mpz_t());
    }
  }
  if (gcd == 0) return f;
  RationalField out = f;
  out *= Rational(lcm, gcd);
  return out;
}

[[noreturn]] void fail(int line, const std::string& what) {
  throw std::runtime_error("basis file line " + std::to_string(line) + ": " + what);
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

Polynomial<Rational> parse_component(const std::string& text, char name, int line) {
  std::string body = trim(text);
  if (body.size() < 2 || body[0] != name || body[1] != ':') {
    fail(line, std::string("expected component '") + name + ":'");
  }
  Polynomial<Rational> p;
  std::istringstream terms(body.substr(2));
  std::string term;
  while (terms >> term) {
    const auto colon = term.find(':');
    if (colon == std::string::npos) fail(line, "term without ':' (" + term + ")");
    Exponent e{};
    std::istringstream exps(term.substr(0, colon));
    std::string part;
    for (std::size_t k = 0; k < 3; ++k) {
      if (!std::getline(exps, part, ',')) fail(line, "bad exponent triple in " + term);
      try {
        std::size_t used = 0;
        e[k] = std::stoi(part, &used);
        if (used != part.size() || e[k] < 0) throw std::invalid_argument(part);
      } catch (const std::exception&) {
        fail(line, "bad exponent '" + part + "'");
      }
    }
    if (std::getline(exps, part, ',')) fail(line, "too many exponents in " + term);
    try {
      p.add_term(e, parse_rational(term.substr(colon + 1)));
    } catch (const std::invalid_argument&) {
      fail(line, "bad coefficient in " + term);
    }
  }
  return p;
}

}  // namespace

void write_basis(std::ostream& out, const Basis& basis) {
  out << "# " << kFormatTag << '\n';
  out << "# a2 = " << to_string(basis.domain.a2()) << '\n';
  out << "# b2 = " << to_string(basis.domain.b2()) << '\n';
  out << "# c2 = " << to_string(basis.domain.c2()) << '\n';
  out << "# degree = " << basis.degree << '\n';
  out << "# fields = " << basis.raw_fields.size() << '\n';
  static constexpr char names[3] = {'x', 'y', 'z'};
  for (const auto& f : basis.raw_fields) {
    const RationalField g = integer_scaled(f);
    for (int a = 0; a < 3; ++a) {
      if (a > 0) out << " |";
      out << (a > 0 ? " " : "") << names[a] << ':';
      for (const auto& [e, c] : g[a].terms()) {
        out << ' ' << e[0] << ',' << e[1] << ',' << e[2] << ':' << to_string(c);
      }
    }
    out << '\n';
  }
}

BasisFile read_basis(std::istream& in) {
  BasisFile file;
  bool tagged = false, have_a = false, have_b = false, have_c = false, have_n = false;
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const std::string text = trim(raw);
    if (text.empty()) continue;
    if (text[0] == '#') {
      const std::string body = trim(text.substr(1));
      if (body == kFormatTag) {
        tagged = true;
        continue;
      }
      const auto eq = body.find('=');
      if (eq == std::string::npos) continue;
      const std::string key = trim(body.substr(0, eq));
      const std::string value = trim(body.substr(eq + 1));
      try {
        if (key == "a2") {
          file.a2 = parse_rational(value);
          have_a = true;
        } else if (key == "b2") {
          file.b2 = parse_rational(value);
          have_b = true;
        } else if (key == "c2") {
          file.c2 = parse_rational(value);
          have_c = true;
        } else if (key == "degree") {
          file.degree = std::stoi(value);
          have_n = true;
        }
      } catch (const std::exception&) {
        fail(line, "bad header value for " + key);
      }
      continue;
    }
    if (!tagged) fail(line, "missing format tag before field data");
    const auto bar1 = text.find('|');
    const auto bar2 = bar1 == std::string::npos ? bar1 : text.find('|', bar1 + 1);
    if (bar2 == std::string::npos) fail(line, "expected three '|'-separated components");
    RationalField f;
    f[0] = parse_component(text.substr(0, bar1), 'x', line);
    f[1] = parse_component(text.substr(bar1 + 1, bar2 - bar1 - 1), 'y', line);
    f[2] = parse_component(text.substr(bar2 + 1), 'z', line);
    file.fields.push_back(std::move(f));
  }
  if (!tagged) throw std::runtime_error("basis file: missing '# " + std::string(kFormatTag) + "' header");
  if (!(have_a && have_b && have_c && have_n)) {
    throw std::runtime_error("basis file: header must define a2, b2, c2 and degree");
  }
  if (file.a2 <= 0 || file.b2 <= 0 || file.c2 <= 0) {
    throw std::runtime_error("basis file: squared semi-axes must be positive");
  }
  return file;
}

}  // namespace precess
