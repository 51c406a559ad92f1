#include "precess/basis.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <stdexcept>
#include <string>

#include "precess/detail/moments.hpp"

namespace precess {

using detail::IntegralTable;
using detail::LMatrix;
using detail::LVector;
using detail::MonomialSet;

namespace {

using SparseRow = std::map<int, Rational>;

class DisjointSets {
 public:
  explicit DisjointSets(int n) : parent_(static_cast<std::size_t>(n)) {
    std::iota(parent_.begin(), parent_.end(), 0);
  }
  int find(int i) {
    while (parent_[static_cast<std::size_t>(i)] != i) {
      auto& p = parent_[static_cast<std::size_t>(i)];
      p = parent_[static_cast<std::size_t>(p)];
      i = p;
    }
    return i;
  }
  void unite(int i, int j) { parent_[static_cast<std::size_t>(find(i))] = find(j); }

 private:
  std::vector<int> parent_;
};

using RationalMatrix = std::vector<std::vector<Rational>>;

/// In-place reduced row echelon form; returns pivot column of each nonzero row.
std::vector<int> rref(RationalMatrix& m, std::size_t cols) {
  std::vector<int> pivots;
  std::size_t row = 0;
  for (std::size_t col = 0; col < cols && row < m.size(); ++col) {
    std::size_t sel = row;
    while (sel < m.size() && m[sel][col] == 0) ++sel;
    if (sel == m.size()) continue;
    std::swap(m[sel], m[row]);
    const Rational inv = 1 / m[row][col];
    for (std::size_t k = col; k < cols; ++k) m[row][k] *= inv;
    for (std::size_t r = 0; r < m.size(); ++r) {
      if (r == row || m[r][col] == 0) continue;
      const Rational factor = m[r][col];
      for (std::size_t k = col; k < cols; ++k) {
        if (m[row][k] != 0) m[r][k] -= factor * m[row][k];
      }
    }
    pivots.push_back(static_cast<int>(col));
    ++row;
  }
  m.resize(row);
  return pivots;
}

std::vector<std::vector<Rational>> nullspace(const RationalMatrix& a, std::size_t cols) {
  RationalMatrix m = a;
  const std::vector<int> pivots = rref(m, cols);
  std::vector<bool> is_pivot(cols, false);
  for (int p : pivots) is_pivot[static_cast<std::size_t>(p)] = true;
  std::vector<std::vector<Rational>> out;
  for (std::size_t free = 0; free < cols; ++free) {
    if (is_pivot[free]) continue;
    std::vector<Rational> v(cols, Rational(0));
    v[free] = 1;
    for (std::size_t r = 0; r < pivots.size(); ++r) {
      v[static_cast<std::size_t>(pivots[r])] = -m[r][free];
    }
    out.push_back(std::move(v));
  }
  return out;
}

// Reflection class of a field: parity of each coordinate of x^m e_a for any
// of its terms. Fields in different classes are L2-orthogonal.
int reflection_class(const RationalField& f) {
  for (int a = 0; a < 3; ++a) {
    if (f[a].is_zero()) continue;
    const Exponent& e = f[a].terms().begin()->first;
    int cls = 0;
    for (int k = 0; k < 3; ++k) cls |= ((e[static_cast<std::size_t>(k)] + (a == k)) & 1) << k;
    return cls;
  }
  return -1;
}

struct OrderedField {
  int degree;
  int block;
  int pivot;
  RationalField field;
};

RationalField canonical_rotation(const Domain& d, int axis) {
  // diag(a^2,b^2,c^2) (e_axis x x), normalised so the leading component is
  // -y, -z or z as appropriate.
  const Rational s[3] = {d.a2(), d.b2(), d.c2()};
  RationalField f;
  const int i = (axis + 1) % 3;
  const int j = (axis + 2) % 3;
  // e_axis x x has component i equal to -x_j and component j equal to x_i.
  f[i] = Polynomial<Rational>::monomial(
      [&] { Exponent e{0, 0, 0}; e[static_cast<std::size_t>(j)] = 1; return e; }(), Rational(-1));
  f[j] = Polynomial<Rational>::monomial(
      [&] { Exponent e{0, 0, 0}; e[static_cast<std::size_t>(i)] = 1; return e; }(),
      Rational(s[j] / s[i]));
  return f;
}

}  // namespace

SymbolicCheck check_field(const RationalField& v, const Domain& d) {
  SymbolicCheck out;
  out.solenoidal = divergence(v).is_zero();
  const Polynomial<Rational> chi = d.chi();
  const Polynomial<Rational> flux = dot(v, gradient(chi));
  out.tangent = division_remainder(flux, chi).is_zero();
  return out;
}

std::vector<RationalField> tangent_solenoidal_fields(const Domain& d, int N) {
  if (N < 1) throw std::invalid_argument("basis degree must be >= 1 (got " + std::to_string(N) + ")");

  const MonomialSet vset(N);
  const MonomialSet qset(N - 1);
  const int nm = vset.size();
  const int n_cols = 3 * nm + qset.size();
  auto vcol = [&](int a, const Exponent& e) {
    const int i = vset.index(e);
    return i < 0 ? -1 : a * nm + i;
  };
  auto qcol = [&](const Exponent& e) {
    const int i = qset.index(e);
    return i < 0 ? -1 : 3 * nm + i;
  };
  const Rational inv[3] = {1 / d.a2(), 1 / d.b2(), 1 / d.c2()};

  std::vector<SparseRow> rows;
  // div v = 0, coefficient of x^e for deg e <= N-1.
  for (int m = 0; m < MonomialSet(N - 1).size(); ++m) {
    const Exponent e = MonomialSet(N - 1)[m];
    SparseRow row;
    for (int a = 0; a < 3; ++a) {
      Exponent src = e;
      ++src[static_cast<std::size_t>(a)];
      row[vcol(a, src)] += Rational(src[static_cast<std::size_t>(a)]);
    }
    rows.push_back(std::move(row));
  }
  // v.grad(chi) - chi q = 0 with grad chi = -2 (x/a^2, y/b^2, z/c^2) and
  // chi = 1 - sum x_a^2/a_a^2; coefficient of x^e for deg e <= N+1.
  const MonomialSet eset(N + 1);
  for (int m = 0; m < eset.size(); ++m) {
    const Exponent e = eset[m];
    SparseRow row;
    for (int a = 0; a < 3; ++a) {
      const auto ax = static_cast<std::size_t>(a);
      if (e[ax] >= 1) {
        Exponent src = e;
        --src[ax];
        if (int c = vcol(a, src); c >= 0) row[c] += Rational(-2 * inv[a]);
      }
      if (e[ax] >= 2) {
        Exponent src = e;
        src[ax] -= 2;
        if (int c = qcol(src); c >= 0) row[c] += inv[a];
      }
    }
    if (int c = qcol(e); c >= 0) row[c] += Rational(-1);
    for (auto it = row.begin(); it != row.end();) it = it->second == 0 ? row.erase(it) : std::next(it);
    if (!row.empty()) rows.push_back(std::move(row));
  }

  // Independent blocks of unknowns (the reflection symmetries of the
  // ellipsoid split the system).
  DisjointSets sets(n_cols);
  for (const auto& row : rows) {
    const int first = row.begin()->first;
    for (const auto& [c, val] : row) sets.unite(first, c);
  }
  std::map<int, std::vector<int>> block_cols;
  for (int c = 0; c < n_cols; ++c) block_cols[sets.find(c)].push_back(c);
  std::map<int, std::vector<const SparseRow*>> block_rows;
  for (const auto& row : rows) block_rows[sets.find(row.begin()->first)].push_back(&row);

  std::vector<OrderedField> collected;
  int block_id = 0;
  for (const auto& [root, cols] : block_cols) {
    std::map<int, std::size_t> local;
    for (std::size_t i = 0; i < cols.size(); ++i) local[cols[i]] = i;
    RationalMatrix a;
    for (const SparseRow* row : block_rows[root]) {
      std::vector<Rational> dense(cols.size(), Rational(0));
      for (const auto& [c, val] : *row) dense[local[c]] = val;
      a.push_back(std::move(dense));
    }
    const auto null = nullspace(a, cols.size());
    if (null.empty()) {
      ++block_id;
      continue;
    }

    // Re-echelon the velocity part with the highest-degree columns first so
    // that each row's pivot degree is its polynomial degree.
    std::vector<std::size_t> vlocal;
    for (std::size_t i = 0; i < cols.size(); ++i) {
      if (cols[i] < 3 * nm) vlocal.push_back(i);
    }
    std::stable_sort(vlocal.begin(), vlocal.end(), [&](std::size_t l, std::size_t r) {
      return total_degree(vset[cols[l] % nm]) > total_degree(vset[cols[r] % nm]);
    });
    RationalMatrix z;
    for (const auto& v : null) {
      std::vector<Rational> row;
      row.reserve(vlocal.size());
      for (std::size_t i : vlocal) row.push_back(v[i]);
      z.push_back(std::move(row));
    }
    const std::vector<int> pivots = rref(z, vlocal.size());
    if (pivots.size() != null.size()) {
      throw std::logic_error("tangent_solenoidal_fields: velocity part lost rank");
    }
    for (std::size_t r = 0; r < z.size(); ++r) {
      RationalField f;
      for (std::size_t k = 0; k < vlocal.size(); ++k) {
        if (z[r][k] == 0) continue;
        const int col = cols[vlocal[k]];
        f[col / nm].add_term(vset[col % nm], z[r][k]);
      }
      const int pivot_col = cols[vlocal[static_cast<std::size_t>(pivots[r])]];
      collected.push_back({total_degree(vset[pivot_col % nm]), block_id, pivots[r], std::move(f)});
    }
    ++block_id;
  }

  std::stable_sort(collected.begin(), collected.end(), [](const auto& l, const auto& r) {
    if (l.degree != r.degree) return l.degree < r.degree;
    if (l.block != r.block) return l.block < r.block;
    return l.pivot < r.pivot;
  });

  std::vector<RationalField> out;
  int linear = 0;
  for (const auto& f : collected) {
    if (f.degree < 1) throw std::logic_error("tangent_solenoidal_fields: constant tangent field");
    if (f.degree == 1) ++linear;
  }
  if (linear != 3) {
    throw std::logic_error("tangent_solenoidal_fields: expected 3 linear fields, found " +
                           std::to_string(linear));
  }
  // Canonical linear block: the z-rotation first.
  for (int axis : {2, 0, 1}) out.push_back(canonical_rotation(d, axis));
  for (auto& f : collected) {
    if (f.degree > 1) out.push_back(std::move(f.field));
  }
  return out;
}

namespace {

Rational exact_inner(const RationalField& u, const RationalField& v, const Domain& d,
                     std::map<Exponent, Rational, GrLex>& cache) {
  Rational sum(0);
  for (int a = 0; a < 3; ++a) {
    for (const auto& [eu, cu] : u[a].terms()) {
      for (const auto& [ev, cv] : v[a].terms()) {
        const Exponent e{eu[0] + ev[0], eu[1] + ev[1], eu[2] + ev[2]};
        if ((e[0] | e[1] | e[2]) & 1) continue;
        auto it = cache.find(e);
        if (it == cache.end()) it = cache.emplace(e, monomial_integral_exact(e[0], e[1], e[2], d)).first;
        sum += cu * cv * it->second;
      }
    }
  }
  return sum;
}

}  // namespace

RealField to_real(const Field& v) {
  return v.map<long double>([](double c) { return static_cast<long double>(c); });
}

RealField to_real(const RationalField& v) {
  return v.map<long double>([](const Rational& c) { return to_long_double(c); });
}

double Basis::gram_deviation() const {
  if (gram.size() == 0) return 0.0;
  return (gram - Eigen::MatrixXd::Identity(gram.rows(), gram.cols())).cwiseAbs().maxCoeff();
}

Basis build_basis(const Domain& d, int N) {
  std::vector<RationalField> raw = tangent_solenoidal_fields(d, N);
  const auto n = static_cast<Eigen::Index>(raw.size());

  // Exact Gram in units of abc*pi.
  std::vector<int> cls(raw.size());
  for (std::size_t i = 0; i < raw.size(); ++i) cls[i] = reflection_class(raw[i]);
  std::map<Exponent, Rational, GrLex> cache;
  LMatrix g = LMatrix::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j <= i; ++j) {
      if (cls[static_cast<std::size_t>(i)] != cls[static_cast<std::size_t>(j)]) continue;
      const Rational v = exact_inner(raw[static_cast<std::size_t>(i)],
                                     raw[static_cast<std::size_t>(j)], d, cache);
      g(i, j) = g(j, i) = to_long_double(v);
    }
  }

  // Modified Gram-Schmidt with one reorthogonalisation pass in the
  // g-inner product; q holds coefficient rows in the raw basis.
  LMatrix q = LMatrix::Zero(n, n);
  LMatrix gq = LMatrix::Zero(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    LVector v = LVector::Zero(n);
    v(j) = 1.0L;
    for (int pass = 0; pass < 2; ++pass) {
      for (Eigen::Index i = 0; i < j; ++i) {
        const long double coef = gq.row(i).dot(v);
        if (coef != 0.0L) v -= coef * q.row(i).transpose();
      }
    }
    LVector gv = g * v;
    const long double norm2 = v.dot(gv);
    if (!(norm2 > 0.0L)) {
      throw std::runtime_error("build_basis: non-positive Gram-Schmidt pivot at field " +
                               std::to_string(j));
    }
    const long double inv = 1.0L / std::sqrt(norm2);
    q.row(j) = (v * inv).transpose();
    gq.row(j) = (gv * inv).transpose();
  }

  Basis basis{d, N, std::move(raw), {}, {}, {}, 0.0};
  basis.transform = q / std::sqrt(d.integral_unit());

  std::vector<RealField> raw_real;
  raw_real.reserve(basis.raw_fields.size());
  for (const auto& f : basis.raw_fields) raw_real.push_back(to_real(f));
  basis.fields.resize(static_cast<std::size_t>(n));
  for (Eigen::Index j = 0; j < n; ++j) {
    RealField b;
    for (Eigen::Index m = 0; m <= j; ++m) {
      const long double coef = basis.transform(j, m);
      if (coef == 0.0L) continue;
      for (int a = 0; a < 3; ++a) {
        for (const auto& [e, c] : raw_real[static_cast<std::size_t>(m)][a].terms()) {
          b[a].add_term(e, coef * c);
        }
      }
    }
    basis.fields[static_cast<std::size_t>(j)] = std::move(b);
  }

  {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(g.cast<double>());
    const auto& ev = eig.eigenvalues();
    basis.raw_gram_condition = ev.maxCoeff() / ev.minCoeff();
  }

  const MonomialSet mono(N);
  const IntegralTable table(d, 2 * N);
  const LMatrix h = detail::moment_matrix(table, mono, mono);
  const auto b = detail::coefficient_matrices(basis.fields, mono);
  LMatrix gram = LMatrix::Zero(n, n);
  for (const auto& ba : b) gram += ba * h * ba.transpose();
  basis.gram = gram.cast<double>();
  return basis;
}

std::vector<RationalField> curl_form_fields(const Domain& d, int N) {
  if (N < 1) throw std::invalid_argument("curl_form_fields: N >= 1 required");
  std::vector<RationalField> out;
  const MonomialSet mono(N);
  for (int m = 0; m < mono.size(); ++m) {
    if (total_degree(mono[m]) < 1) continue;
    out.push_back(curl_form_field(d, Polynomial<Rational>::monomial(mono[m], Rational(1))));
  }
  return out;
}

RationalField curl_form_field(const Domain& d, const Polynomial<Rational>& psi) {
  return cross(gradient(d.chi()), gradient(psi));
}

Field poincare_field(double beta, double eps_p) {
  if (beta == 0.0 || !(beta > -1.0)) {
    throw std::invalid_argument("poincare_field requires beta > -1 and beta != 0");
  }
  const double k = 2.0 * eps_p / beta;
  Field u;
  u[0].add_term({0, 1, 0}, -1.0);
  u[1].add_term({1, 0, 0}, 1.0);
  u[1].add_term({0, 0, 1}, -k * (1.0 + beta));
  u[2].add_term({0, 1, 0}, k);
  return u;
}

Field solid_rotation(const Vec3& axis) {
  const double norm = std::sqrt(axis[0] * axis[0] + axis[1] * axis[1] + axis[2] * axis[2]);
  if (std::abs(norm - 1.0) > 1e-12) throw std::invalid_argument("solid_rotation: axis must be a unit vector");
  return cross(constant_field<double>(axis), position_field<double>());
}

Projection project(const Field& v, const Basis& basis) {
  const int deg = std::max(v.degree(), basis.degree);
  const IntegralTable table(basis.domain, 2 * std::max(deg, 0));
  const RealField vr = to_real(v);
  Projection out;
  out.coeffs.resize(basis.dim());
  RealField rest = vr;
  for (int j = 0; j < basis.dim(); ++j) {
    const auto& b = basis.fields[static_cast<std::size_t>(j)];
    const long double c = detail::l2_inner(vr, b, table);
    out.coeffs(j) = static_cast<double>(c);
    rest -= b * c;
  }
  out.residual = static_cast<double>(std::sqrt(std::max(0.0L, detail::l2_inner(rest, rest, table))));
  return out;
}

RealField reconstruct(const Eigen::VectorXd& coeffs, const Basis& basis) {
  if (coeffs.size() != basis.dim()) throw std::invalid_argument("reconstruct: dimension mismatch");
  RealField out;
  for (int j = 0; j < basis.dim(); ++j) {
    if (coeffs(j) == 0.0) continue;
    out += basis.fields[static_cast<std::size_t>(j)] * static_cast<long double>(coeffs(j));
  }
  return out;
}

}  // namespace precess
