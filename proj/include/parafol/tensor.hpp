#pragma once

#include <array>
#include <cmath>

#include "parafol/dual.hpp"

namespace parafol {

template <class T>
using Vec3T = std::array<T, 3>;
template <class T>
using Mat3T = std::array<std::array<T, 3>, 3>;
template <class T>
using Vec2T = std::array<T, 2>;
template <class T>
using Mat2T = std::array<std::array<T, 2>, 2>;

using Point = Vec3T<double>;
using Vec3 = Vec3T<double>;
using Mat3 = Mat3T<double>;
using Vec2 = Vec2T<double>;
using Mat2 = Mat2T<double>;

using PointD = Vec3T<Dual>;
using Mat3D = Mat3T<Dual>;
using Vec2D = Vec2T<Dual>;
using Mat2D = Mat2T<Dual>;

template <class T>
Mat3T<T> zero3() {
  Mat3T<T> m;
  for (auto& row : m) row.fill(T(0.0));
  return m;
}

template <class T>
Mat3T<T> diag3(const T& a, const T& b, const T& c) {
  Mat3T<T> m = zero3<T>();
  m[0][0] = a;
  m[1][1] = b;
  m[2][2] = c;
  return m;
}

inline Mat3 identity3() { return diag3(1.0, 1.0, 1.0); }

// Seeds a point so that downstream Dual arithmetic yields coordinate partials.
inline PointD seed(const Point& p) {
  return {Dual::variable(p[0], 0), Dual::variable(p[1], 1), Dual::variable(p[2], 2)};
}
inline PointD lift(const Point& p) { return {Dual(p[0]), Dual(p[1]), Dual(p[2])}; }
inline Point values(const PointD& p) { return {p[0].v, p[1].v, p[2].v}; }

inline Mat3 values(const Mat3D& m) {
  Mat3 r;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) r[i][j] = m[i][j].v;
  return r;
}

// partial(m, k)[i][j] = d m_ij / d x^k
inline Mat3 partial(const Mat3D& m, int k) {
  Mat3 r;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) r[i][j] = m[i][j].d[k];
  return r;
}

template <class T>
Mat3T<T> transpose(const Mat3T<T>& a) {
  Mat3T<T> r;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) r[i][j] = a[j][i];
  return r;
}

template <class T>
Mat3T<T> matmul(const Mat3T<T>& a, const Mat3T<T>& b) {
  Mat3T<T> r = zero3<T>();
  for (int i = 0; i < 3; ++i)
    for (int k = 0; k < 3; ++k)
      for (int j = 0; j < 3; ++j) r[i][j] += a[i][k] * b[k][j];
  return r;
}

// J^T G J: the pull-back of a bilinear form through a Jacobian.
template <class T>
Mat3T<T> congruence(const Mat3T<T>& jac, const Mat3T<T>& g) {
  return matmul(transpose(jac), matmul(g, jac));
}

template <class T>
Vec3T<T> transpose_apply(const Mat3T<T>& jac, const Vec3T<T>& covec) {
  Vec3T<T> r{T(0.0), T(0.0), T(0.0)};
  for (int j = 0; j < 3; ++j)
    for (int i = 0; i < 3; ++i) r[j] += jac[i][j] * covec[i];
  return r;
}

inline Vec3 mat_vec(const Mat3& a, const Vec3& v) {
  Vec3 r{0.0, 0.0, 0.0};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) r[i] += a[i][j] * v[j];
  return r;
}

inline double dot(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }

inline double bilinear(const Mat3& g, const Vec3& u, const Vec3& v) { return dot(u, mat_vec(g, v)); }

inline double det3(const Mat3& a) {
  return a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1]) -
         a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0]) +
         a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0]);
}

// Cofactor inverse; caller is responsible for checking the determinant.
inline Mat3 inverse3(const Mat3& a) {
  const double det = det3(a);
  Mat3 r;
  r[0][0] = (a[1][1] * a[2][2] - a[1][2] * a[2][1]) / det;
  r[0][1] = (a[0][2] * a[2][1] - a[0][1] * a[2][2]) / det;
  r[0][2] = (a[0][1] * a[1][2] - a[0][2] * a[1][1]) / det;
  r[1][0] = (a[1][2] * a[2][0] - a[1][0] * a[2][2]) / det;
  r[1][1] = (a[0][0] * a[2][2] - a[0][2] * a[2][0]) / det;
  r[1][2] = (a[0][2] * a[1][0] - a[0][0] * a[1][2]) / det;
  r[2][0] = (a[1][0] * a[2][1] - a[1][1] * a[2][0]) / det;
  r[2][1] = (a[0][1] * a[2][0] - a[0][0] * a[2][1]) / det;
  r[2][2] = (a[0][0] * a[1][1] - a[0][1] * a[1][0]) / det;
  return r;
}

// Smallest eigenvalue of a symmetric 3x3 matrix.
double min_eigenvalue(const Mat3& a);

inline double max_abs_diff(const Mat3& a, const Mat3& b) {
  double m = 0.0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) m = std::fmax(m, std::fabs(a[i][j] - b[i][j]));
  return m;
}

}  // namespace parafol
