// SPDX-License-Identifier: Apache-2.0
#include "rbm/simd.hpp"

#if defined(__x86_64__) || defined(_M_X64)
#define RBM_HAVE_X86 1
#include <immintrin.h>
#else
#define RBM_HAVE_X86 0
#endif

namespace rbm::simd::avx2 {

#if RBM_HAVE_X86

#define RBM_AVX2 __attribute__((target("avx2,fma")))

namespace {

RBM_AVX2 inline double hsum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  __m128d sh = _mm_unpackhi_pd(lo, lo);
  return _mm_cvtsd_f64(_mm_add_sd(lo, sh));
}

}  // namespace

RBM_AVX2 double dot(const double* a, const double* b, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4), acc1);
  }
  for (; i + 4 <= n; i += 4) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
  }
  double s = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) s += a[i] * b[i];
  return s;
}

RBM_AVX2 double abs_diff_sum(const double* a, const double* b, std::size_t n) {
  // clear the sign bit
  const __m256d mask = _mm256_castsi256_pd(_mm256_set1_epi64x(0x7fffffffffffffffLL));
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d d = _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
    acc = _mm256_add_pd(acc, _mm256_and_pd(d, mask));
  }
  double s = hsum(acc);
  for (; i < n; ++i) s += a[i] > b[i] ? a[i] - b[i] : b[i] - a[i];
  return s;
}

RBM_AVX2 void matvec(const double* m, std::size_t rows, std::size_t cols, const double* x,
                     double* y) {
  for (std::size_t i = 0; i < rows; ++i) y[i] = dot(m + i * cols, x, cols);
}

RBM_AVX2 void vecmat(const double* x, const double* m, std::size_t rows, std::size_t cols,
                     double* y) {
  for (std::size_t j = 0; j < cols; ++j) y[j] = 0.0;
  for (std::size_t i = 0; i < rows; ++i) {
    const __m256d xi = _mm256_set1_pd(x[i]);
    const double* row = m + i * cols;
    std::size_t j = 0;
    for (; j + 4 <= cols; j += 4) {
      __m256d acc = _mm256_loadu_pd(y + j);
      _mm256_storeu_pd(y + j, _mm256_fmadd_pd(xi, _mm256_loadu_pd(row + j), acc));
    }
    for (; j < cols; ++j) y[j] += x[i] * row[j];
  }
}

#undef RBM_AVX2

#else  // no x86: forward to the reference kernels

double dot(const double* a, const double* b, std::size_t n) { return scalar::dot(a, b, n); }
double abs_diff_sum(const double* a, const double* b, std::size_t n) {
  return scalar::abs_diff_sum(a, b, n);
}
void matvec(const double* m, std::size_t rows, std::size_t cols, const double* x, double* y) {
  scalar::matvec(m, rows, cols, x, y);
}
void vecmat(const double* x, const double* m, std::size_t rows, std::size_t cols, double* y) {
  scalar::vecmat(x, m, rows, cols, y);
}

#endif

}  // namespace rbm::simd::avx2
