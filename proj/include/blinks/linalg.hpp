#pragma once

#include "rational.hpp"

#include <cstddef>
#include <stdexcept>
#include <utility>
#include <vector>

namespace blinks {

using Vec = std::vector<Rational>;
using Mat = std::vector<Vec>;

// Solves A x = b exactly by Gaussian elimination; throws on singular A.
inline Vec solve_linear(Mat a, Vec b) {
  const std::size_t n = a.size();
  if (b.size() != n) throw std::invalid_argument("solve_linear: rhs size mismatch");
  for (const auto& row : a)
    if (row.size() != n) throw std::invalid_argument("solve_linear: matrix not square");

  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    while (piv < n && a[piv][col] == 0) ++piv;
    if (piv == n) throw std::domain_error("solve_linear: singular matrix");
    std::swap(a[piv], a[col]);
    std::swap(b[piv], b[col]);
    for (std::size_t r = col + 1; r < n; ++r) {
      if (a[r][col] == 0) continue;
      Rational f = a[r][col] / a[col][col];
      for (std::size_t c = col; c < n; ++c) a[r][c] -= f * a[col][c];
      b[r] -= f * b[col];
    }
  }

  Vec x(n);
  for (std::size_t i = n; i-- > 0;) {
    Rational s = b[i];
    for (std::size_t c = i + 1; c < n; ++c) s -= a[i][c] * x[c];
    x[i] = s / a[i][i];
  }
  return x;
}

// Exact determinant via Gaussian elimination with row swaps.
inline Rational determinant(Mat a) {
  const std::size_t n = a.size();
  for (const auto& row : a)
    if (row.size() != n) throw std::invalid_argument("determinant: matrix not square");
  Rational d = 1;
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    while (piv < n && a[piv][col] == 0) ++piv;
    if (piv == n) return 0;
    if (piv != col) {
      std::swap(a[piv], a[col]);
      d = -d;
    }
    d *= a[col][col];
    for (std::size_t r = col + 1; r < n; ++r) {
      if (a[r][col] == 0) continue;
      Rational f = a[r][col] / a[col][col];
      for (std::size_t c = col; c < n; ++c) a[r][c] -= f * a[col][c];
    }
  }
  return d;
}

// Sylvester test on leading principal minors: (-1)^k det(A_k) > 0 for every k.
inline bool is_negative_definite(const Mat& a) {
  const std::size_t n = a.size();
  for (std::size_t k = 1; k <= n; ++k) {
    Mat sub(k, Vec(k));
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = 0; j < k; ++j) sub[i][j] = a[i][j];
    Rational d = determinant(std::move(sub));
    const bool ok = (k % 2 == 1) ? d < 0 : d > 0;
    if (!ok) return false;
  }
  return true;
}

}  // namespace blinks
