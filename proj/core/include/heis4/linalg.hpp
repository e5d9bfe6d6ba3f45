#pragma once

#include <array>
#include <cmath>
#include <stdexcept>

#include "heis4/jet.hpp"

namespace heis4 {

template <class S>
using Vec4 = std::array<S, 4>;
template <class S>
using Mat4 = std::array<std::array<S, 4>, 4>;
template <class S>
using Mat3 = std::array<std::array<S, 3>, 3>;
template <class S>
using Ten3 = std::array<Mat4<S>, 4>;  // [a][b][c]
template <class S>
using Ten4 = std::array<Ten3<S>, 4>;  // [a][b][c][d]

template <class S>
Mat4<S> mat4_zero() {
  Mat4<S> m;
  for (auto& row : m) row.fill(S(0.0));
  return m;
}
template <class S>
Mat3<S> mat3_zero() {
  Mat3<S> m;
  for (auto& row : m) row.fill(S(0.0));
  return m;
}
template <class S>
Ten4<S> ten4_zero() {
  Ten4<S> t;
  for (auto& a : t)
    for (auto& b : a)
      for (auto& row : b) row.fill(S(0.0));
  return t;
}

template <class S>
S mat3_det(const Mat3<S>& m) {
  return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
         m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
         m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
}

template <class S>
Mat3<S> mat3_inverse(const Mat3<S>& m) {
  const S det = mat3_det(m);
  Mat3<S> inv;
  inv[0][0] = (m[1][1] * m[2][2] - m[1][2] * m[2][1]) / det;
  inv[0][1] = (m[0][2] * m[2][1] - m[0][1] * m[2][2]) / det;
  inv[0][2] = (m[0][1] * m[1][2] - m[0][2] * m[1][1]) / det;
  inv[1][0] = (m[1][2] * m[2][0] - m[1][0] * m[2][2]) / det;
  inv[1][1] = (m[0][0] * m[2][2] - m[0][2] * m[2][0]) / det;
  inv[1][2] = (m[0][2] * m[1][0] - m[0][0] * m[1][2]) / det;
  inv[2][0] = (m[1][0] * m[2][1] - m[1][1] * m[2][0]) / det;
  inv[2][1] = (m[0][1] * m[2][0] - m[0][0] * m[2][1]) / det;
  inv[2][2] = (m[0][0] * m[1][1] - m[0][1] * m[1][0]) / det;
  return inv;
}

// Gauss-Jordan with partial pivoting on the underlying values; jet divisions
// propagate derivatives exactly.
template <class S>
Mat4<S> mat4_inverse(const Mat4<S>& m, S* det_out = nullptr) {
  Mat4<S> a = m;
  Mat4<S> inv = mat4_zero<S>();
  for (int i = 0; i < 4; ++i) inv[i][i] = S(1.0);
  S det = S(1.0);
  for (int col = 0; col < 4; ++col) {
    int pivot = col;
    double best = std::abs(value_of(a[col][col]));
    for (int r = col + 1; r < 4; ++r) {
      const double cand = std::abs(value_of(a[r][col]));
      if (cand > best) {
        best = cand;
        pivot = r;
      }
    }
    if (best == 0.0) throw std::domain_error("mat4_inverse: singular matrix");
    if (pivot != col) {
      std::swap(a[pivot], a[col]);
      std::swap(inv[pivot], inv[col]);
      det = -det;
    }
    const S p = a[col][col];
    det = det * p;
    for (int j = 0; j < 4; ++j) {
      a[col][j] = a[col][j] / p;
      inv[col][j] = inv[col][j] / p;
    }
    for (int r = 0; r < 4; ++r) {
      if (r == col) continue;
      const S f = a[r][col];
      for (int j = 0; j < 4; ++j) {
        a[r][j] = a[r][j] - f * a[col][j];
        inv[r][j] = inv[r][j] - f * inv[col][j];
      }
    }
  }
  if (det_out) *det_out = det;
  return inv;
}

template <class S>
S mat4_det(const Mat4<S>& m) {
  S det;
  mat4_inverse(m, &det);
  return det;
}

// Jet-seeds a chart point: partial slot mu tracks x^mu.
template <class S>
Vec4<Jet<S>> seed_point(const Vec4<S>& p) {
  Vec4<Jet<S>> q;
  for (int mu = 0; mu < 4; ++mu) {
    q[mu] = Jet<S>(p[mu]);
    q[mu].d[mu] = S(1.0);
  }
  return q;
}

inline double max_abs(double x) { return std::abs(x); }
template <class S>
double max_abs(const Jet<S>& j) {
  double m = max_abs(j.v);
  for (int i = 0; i < 4; ++i) m = std::max(m, max_abs(j.d[i]));
  return m;
}

}  // namespace heis4
