#pragma once

// Fixed-size vectors and 3x3 matrices over doubles or jets, plus the
// Lorentz vectors of R^7_1 used by the light-cone model.

#include <array>
#include <cmath>
#include <cstddef>

#include "ddvv/jet.hpp"

namespace ddvv {

template <class T, std::size_t N>
struct Vec {
  std::array<T, N> c{};

  T& operator[](std::size_t i) { return c[i]; }
  const T& operator[](std::size_t i) const { return c[i]; }
  static constexpr std::size_t size() { return N; }

  Vec operator-() const {
    Vec r;
    for (std::size_t i = 0; i < N; ++i) r[i] = -c[i];
    return r;
  }
  Vec& operator+=(const Vec& b) {
    for (std::size_t i = 0; i < N; ++i) c[i] = c[i] + b[i];
    return *this;
  }
  Vec& operator-=(const Vec& b) {
    for (std::size_t i = 0; i < N; ++i) c[i] = c[i] - b[i];
    return *this;
  }
  friend Vec operator+(Vec a, const Vec& b) { return a += b; }
  friend Vec operator-(Vec a, const Vec& b) { return a -= b; }
  friend Vec operator*(const T& s, Vec a) {
    for (std::size_t i = 0; i < N; ++i) a[i] = s * a[i];
    return a;
  }
  friend Vec operator*(Vec a, const T& s) { return s * a; }
  template <class U = T, class = std::enable_if_t<!std::is_same_v<U, double>>>
  friend Vec operator*(double s, Vec a) {
    for (std::size_t i = 0; i < N; ++i) a[i] = s * a[i];
    return a;
  }
};

template <class T>
using Vec3 = Vec<T, 3>;
template <class T>
using LVec = Vec<T, 7>;
template <class T>
using Mat3 = std::array<std::array<T, 3>, 3>;
template <class T>
using Mat2 = std::array<std::array<T, 2>, 2>;

/// <a,b> = -a0 b0 + sum_{k>=1} a_k b_k.
template <class T>
T lorentz_dot(const LVec<T>& a, const LVec<T>& b) {
  T s = -(a[0] * b[0]);
  for (std::size_t k = 1; k < 7; ++k) s = s + a[k] * b[k];
  return s;
}

template <class T, std::size_t N>
T euclid_dot(const Vec<T, N>& a, const Vec<T, N>& b) {
  T s = a[0] * b[0];
  for (std::size_t k = 1; k < N; ++k) s = s + a[k] * b[k];
  return s;
}

template <class T>
Vec3<T> cross(const Vec3<T>& a, const Vec3<T>& b) {
  return {{a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]}};
}

template <class T>
T det3(const Mat3<T>& m) {
  return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
         m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
}

/// Transposed cofactor matrix; adj(M) M = det(M) I.
template <class T>
Mat3<T> adjugate3(const Mat3<T>& m) {
  Mat3<T> a;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      const int r0 = (j + 1) % 3, r1 = (j + 2) % 3, c0 = (i + 1) % 3, c1 = (i + 2) % 3;
      a[i][j] = m[r0][c0] * m[r1][c1] - m[r0][c1] * m[r1][c0];
    }
  return a;
}

template <class T>
Mat3<T> inverse3(const Mat3<T>& m) {
  const Mat3<T> a = adjugate3(m);
  const T d = det3(m);
  Mat3<T> r;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) r[i][j] = a[i][j] / d;
  return r;
}

template <class T>
Mat3<T> matmul(const Mat3<T>& a, const Mat3<T>& b) {
  Mat3<T> r;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      T s = a[i][0] * b[0][j];
      for (int k = 1; k < 3; ++k) s = s + a[i][k] * b[k][j];
      r[i][j] = s;
    }
  return r;
}

template <class T>
Mat3<T> transpose(const Mat3<T>& a) {
  Mat3<T> r;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) r[i][j] = a[j][i];
  return r;
}

/// R M R^t.
template <class T>
Mat3<T> congruence(const Mat3<T>& r, const Mat3<T>& m) {
  return matmul(matmul(r, m), transpose(r));
}

template <class T>
Mat3<T> identity3() {
  Mat3<T> r;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) r[i][j] = T{} + (i == j ? 1.0 : 0.0);
  return r;
}

inline Mat3<Jet> constant_mat3(const Mat3<double>& m, int order) {
  Mat3<Jet> r;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) r[i][j] = Jet::constant(m[i][j], order);
  return r;
}

// Value and derivative maps over containers of jets.

inline double value(const Jet& j) { return j.value(); }

template <std::size_t N>
Vec<double, N> value(const Vec<Jet, N>& v) {
  Vec<double, N> r;
  for (std::size_t i = 0; i < N; ++i) r[i] = v[i].value();
  return r;
}

inline Mat3<double> value(const Mat3<Jet>& m) {
  Mat3<double> r;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) r[i][j] = m[i][j].value();
  return r;
}

template <std::size_t N>
Vec<Jet, N> derivative(const Vec<Jet, N>& v, int axis) {
  Vec<Jet, N> r;
  for (std::size_t i = 0; i < N; ++i) r[i] = v[i].derivative(axis);
  return r;
}

/// Directional derivative sum_a X^a d_a f.
inline Jet along(const Vec3<Jet>& X, const Jet& f) {
  return X[0] * f.derivative(0) + X[1] * f.derivative(1) + X[2] * f.derivative(2);
}

template <std::size_t N>
Vec<Jet, N> along(const Vec3<Jet>& X, const Vec<Jet, N>& v) {
  Vec<Jet, N> r;
  for (std::size_t i = 0; i < N; ++i) r[i] = along(X, v[i]);
  return r;
}

inline Vec3<Jet> row(const Mat3<Jet>& m, int i) { return {{m[i][0], m[i][1], m[i][2]}}; }

template <std::size_t N>
double max_abs(const Vec<double, N>& v) {
  double m = 0.0;
  for (std::size_t i = 0; i < N; ++i) m = std::max(m, std::abs(v[i]));
  return m;
}

}  // namespace ddvv
