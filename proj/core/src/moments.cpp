#include "precess/detail/moments.hpp"

#include <stdexcept>

namespace precess::detail {

MonomialSet::MonomialSet(int max_degree) : max_degree_(max_degree) {
  if (max_degree < 0) throw std::invalid_argument("MonomialSet: negative degree");
  const int s = max_degree + 1;
  lookup_.assign(static_cast<std::size_t>(s * s * s), -1);
  for (int deg = 0; deg <= max_degree; ++deg) {
    for (int i = deg; i >= 0; --i) {
      for (int j = deg - i; j >= 0; --j) {
        const int k = deg - i - j;
        lookup_[static_cast<std::size_t>((i * s + j) * s + k)] = static_cast<int>(list_.size());
        list_.push_back({i, j, k});
      }
    }
  }
}

int MonomialSet::index(const Exponent& e) const {
  if (e[0] < 0 || e[1] < 0 || e[2] < 0 || total_degree(e) > max_degree_) return -1;
  const int s = max_degree_ + 1;
  return lookup_[static_cast<std::size_t>((e[0] * s + e[1]) * s + e[2])];
}

IntegralTable::IntegralTable(const Domain& d, int max_degree, std::optional<Hemisphere> half)
    : max_degree_(max_degree), stride_(max_degree + 1) {
  values_.assign(static_cast<std::size_t>(stride_ * stride_ * stride_), 0.0L);
  for (int p = 0; p <= max_degree; ++p) {
    for (int q = 0; p + q <= max_degree; ++q) {
      for (int r = 0; p + q + r <= max_degree; ++r) {
        const Rational exact = half ? half_monomial_integral_exact(p, q, r, d, *half)
                                    : monomial_integral_exact(p, q, r, d);
        const long double unit = half ? half_integral_unit(r, d) : d.integral_unit();
        values_[static_cast<std::size_t>((p * stride_ + q) * stride_ + r)] =
            to_long_double(exact) * unit;
      }
    }
  }
}

LMatrix moment_matrix(const IntegralTable& table, const MonomialSet& rows, const MonomialSet& cols) {
  if (rows.max_degree() + cols.max_degree() > table.max_degree()) {
    throw std::logic_error("moment_matrix: integral table degree too small");
  }
  LMatrix h(rows.size(), cols.size());
  for (int m = 0; m < rows.size(); ++m) {
    for (int n = 0; n < cols.size(); ++n) {
      const Exponent& a = rows[m];
      const Exponent& b = cols[n];
      h(m, n) = table(a[0] + b[0], a[1] + b[1], a[2] + b[2]);
    }
  }
  return h;
}

std::array<LMatrix, 3> coefficient_matrices(const std::vector<VectorField<long double>>& fields,
                                            const MonomialSet& monomials) {
  std::array<LMatrix, 3> out;
  const auto n = static_cast<Eigen::Index>(fields.size());
  for (int a = 0; a < 3; ++a) {
    out[static_cast<std::size_t>(a)] = LMatrix::Zero(n, monomials.size());
    for (Eigen::Index i = 0; i < n; ++i) {
      for (const auto& [e, c] : fields[static_cast<std::size_t>(i)][a].terms()) {
        const int idx = monomials.index(e);
        if (idx < 0) throw std::logic_error("coefficient_matrices: monomial outside set");
        out[static_cast<std::size_t>(a)](i, idx) = c;
      }
    }
  }
  return out;
}

LMatrix derivative_matrix(const MonomialSet& monomials, int axis) {
  LMatrix d = LMatrix::Zero(monomials.size(), monomials.size());
  const auto ax = static_cast<std::size_t>(axis);
  for (int m = 0; m < monomials.size(); ++m) {
    Exponent e = monomials[m];
    if (e[ax] == 0) continue;
    const int power = e[ax];
    --e[ax];
    d(m, monomials.index(e)) = static_cast<long double>(power);
  }
  return d;
}

long double l2_inner(const VectorField<long double>& u, const VectorField<long double>& v,
                     const IntegralTable& table) {
  if (u.degree() + v.degree() > table.max_degree()) {
    throw std::logic_error("l2_inner: integral table degree too small");
  }
  long double sum = 0.0L;
  for (int a = 0; a < 3; ++a) {
    for (const auto& [eu, cu] : u[a].terms()) {
      for (const auto& [ev, cv] : v[a].terms()) {
        sum += cu * cv * table(eu[0] + ev[0], eu[1] + ev[1], eu[2] + ev[2]);
      }
    }
  }
  return sum;
}

}  // namespace precess::detail
