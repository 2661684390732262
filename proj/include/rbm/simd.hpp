// SPDX-License-Identifier: Apache-2.0
#pragma once

// Dense inner loops used by the operator and histogram code. Every kernel has
// a scalar reference implementation; an AVX2/FMA variant is selected at
// runtime when the CPU supports it. The two must agree to rounding.

#include <cstddef>
#include <span>

namespace rbm::simd {

enum class Backend { scalar, avx2 };

[[nodiscard]] bool avx2_supported() noexcept;

/// Backend used by the dispatching entry points below.
[[nodiscard]] Backend active_backend() noexcept;

/// Overrides runtime selection (tests and benchmarking). Requesting avx2 on
/// a CPU without it falls back to scalar and returns false.
bool force_backend(Backend backend) noexcept;

/// Restores the CPU-detected default.
void reset_backend() noexcept;

[[nodiscard]] const char* backend_name(Backend backend) noexcept;

/// sum_i a[i] * b[i]
double dot(std::span<const double> a, std::span<const double> b);

/// sum_i |a[i] - b[i]|
double abs_diff_sum(std::span<const double> a, std::span<const double> b);

/// y = M x for row-major M of shape rows x cols.
void matvec(std::span<const double> m, std::size_t rows, std::size_t cols,
            std::span<const double> x, std::span<double> y);

/// y = x^T M for row-major M of shape rows x cols.
void vecmat(std::span<const double> x, std::span<const double> m,
            std::size_t rows, std::size_t cols, std::span<double> y);

namespace scalar {
double dot(const double* a, const double* b, std::size_t n);
double abs_diff_sum(const double* a, const double* b, std::size_t n);
void matvec(const double* m, std::size_t rows, std::size_t cols, const double* x, double* y);
void vecmat(const double* x, const double* m, std::size_t rows, std::size_t cols, double* y);
}  // namespace scalar

namespace avx2 {
double dot(const double* a, const double* b, std::size_t n);
double abs_diff_sum(const double* a, const double* b, std::size_t n);
void matvec(const double* m, std::size_t rows, std::size_t cols, const double* x, double* y);
void vecmat(const double* x, const double* m, std::size_t rows, std::size_t cols, double* y);
}  // namespace avx2

}  // namespace rbm::simd
