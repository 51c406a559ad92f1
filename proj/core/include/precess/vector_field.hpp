#pragma once

#include <array>
#include <cstddef>

#include "precess/polynomial.hpp"

namespace precess {

using Vec3 = std::array<double, 3>;

/// Triple of polynomial components (v_x, v_y, v_z).
template <class T>
struct VectorField {
  std::array<Polynomial<T>, 3> comp;

  const Polynomial<T>& operator[](int i) const { return comp[static_cast<std::size_t>(i)]; }
  Polynomial<T>& operator[](int i) { return comp[static_cast<std::size_t>(i)]; }

  int degree() const {
    int d = -1;
    for (const auto& c : comp) d = c.degree() > d ? c.degree() : d;
    return d;
  }
  bool is_zero() const { return comp[0].is_zero() && comp[1].is_zero() && comp[2].is_zero(); }

  VectorField& operator+=(const VectorField& rhs) {
    for (int i = 0; i < 3; ++i) (*this)[i] += rhs[i];
    return *this;
  }
  VectorField& operator-=(const VectorField& rhs) {
    for (int i = 0; i < 3; ++i) (*this)[i] -= rhs[i];
    return *this;
  }
  VectorField& operator*=(const T& s) {
    for (auto& c : comp) c *= s;
    return *this;
  }
  friend VectorField operator+(VectorField lhs, const VectorField& rhs) { return lhs += rhs; }
  friend VectorField operator-(VectorField lhs, const VectorField& rhs) { return lhs -= rhs; }
  friend VectorField operator*(VectorField v, const T& s) { return v *= s; }
  friend VectorField operator*(const T& s, VectorField v) { return v *= s; }
  friend bool operator==(const VectorField& lhs, const VectorField& rhs) {
    return lhs.comp == rhs.comp;
  }

  template <class U>
  std::array<U, 3> evaluate(U x, U y, U z) const {
    return {comp[0].evaluate(x, y, z), comp[1].evaluate(x, y, z), comp[2].evaluate(x, y, z)};
  }

  template <class U, class F>
  VectorField<U> map(F&& convert) const {
    VectorField<U> out;
    for (int i = 0; i < 3; ++i) out[i] = (*this)[i].template map<U>(convert);
    return out;
  }
};

template <class T>
Polynomial<T> divergence(const VectorField<T>& v) {
  return v[0].derivative(0) + v[1].derivative(1) + v[2].derivative(2);
}

template <class T>
Polynomial<T> dot(const VectorField<T>& u, const VectorField<T>& v) {
  return u[0] * v[0] + u[1] * v[1] + u[2] * v[2];
}

template <class T>
VectorField<T> cross(const VectorField<T>& u, const VectorField<T>& v) {
  VectorField<T> out;
  out[0] = u[1] * v[2] - u[2] * v[1];
  out[1] = u[2] * v[0] - u[0] * v[2];
  out[2] = u[0] * v[1] - u[1] * v[0];
  return out;
}

template <class T>
VectorField<T> gradient(const Polynomial<T>& p) {
  return {{p.derivative(0), p.derivative(1), p.derivative(2)}};
}

/// Position field x = (x, y, z).
template <class T>
VectorField<T> position_field() {
  return {{Polynomial<T>::coordinate(0), Polynomial<T>::coordinate(1),
           Polynomial<T>::coordinate(2)}};
}

/// Constant field with components `c`.
template <class T>
VectorField<T> constant_field(const std::array<T, 3>& c) {
  return {{Polynomial<T>::constant(c[0]), Polynomial<T>::constant(c[1]),
           Polynomial<T>::constant(c[2])}};
}

/// Symmetric part of the velocity gradient, eps[a][b] = (d_b v_a + d_a v_b)/2.
template <class T>
std::array<std::array<Polynomial<T>, 3>, 3> strain_rate(const VectorField<T>& v) {
  std::array<std::array<Polynomial<T>, 3>, 3> eps;
  for (int a = 0; a < 3; ++a) {
    for (int b = 0; b < 3; ++b) {
      eps[a][b] = v[a].derivative(b) + v[b].derivative(a);
      eps[a][b] *= T(T(1) / T(2));
    }
  }
  return eps;
}

}  // namespace precess
