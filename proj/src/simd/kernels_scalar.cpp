// SPDX-License-Identifier: Apache-2.0
#include <cmath>

#include "rbm/simd.hpp"

namespace rbm::simd::scalar {

double dot(const double* a, const double* b, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
  return s;
}

double abs_diff_sum(const double* a, const double* b, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += std::abs(a[i] - b[i]);
  return s;
}

void matvec(const double* m, std::size_t rows, std::size_t cols, const double* x, double* y) {
  for (std::size_t i = 0; i < rows; ++i) y[i] = dot(m + i * cols, x, cols);
}

void vecmat(const double* x, const double* m, std::size_t rows, std::size_t cols, double* y) {
  for (std::size_t j = 0; j < cols; ++j) y[j] = 0.0;
  for (std::size_t i = 0; i < rows; ++i) {
    const double xi = x[i];
    const double* row = m + i * cols;
    for (std::size_t j = 0; j < cols; ++j) y[j] += xi * row[j];
  }
}

}  // namespace rbm::simd::scalar
