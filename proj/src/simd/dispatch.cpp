// SPDX-License-Identifier: Apache-2.0
#include <atomic>

#include "rbm/errors.hpp"
#include "rbm/simd.hpp"

namespace rbm::simd {

namespace {

Backend detect() noexcept {
#if defined(__x86_64__) || defined(_M_X64)
  __builtin_cpu_init();
  if (__builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma")) return Backend::avx2;
#endif
  return Backend::scalar;
}

std::atomic<Backend>& current() noexcept {
  static std::atomic<Backend> backend{detect()};
  return backend;
}

void require_same_size(std::size_t a, std::size_t b, const char* what) {
  if (a != b) throw ArgumentError(std::string(what) + ": length mismatch");
}

}  // namespace

bool avx2_supported() noexcept { return detect() == Backend::avx2; }

Backend active_backend() noexcept { return current().load(std::memory_order_relaxed); }

bool force_backend(Backend backend) noexcept {
  if (backend == Backend::avx2 && !avx2_supported()) {
    current().store(Backend::scalar);
    return false;
  }
  current().store(backend);
  return true;
}

void reset_backend() noexcept { current().store(detect()); }

const char* backend_name(Backend backend) noexcept {
  return backend == Backend::avx2 ? "avx2" : "scalar";
}

double dot(std::span<const double> a, std::span<const double> b) {
  require_same_size(a.size(), b.size(), "dot");
  return active_backend() == Backend::avx2 ? avx2::dot(a.data(), b.data(), a.size())
                                           : scalar::dot(a.data(), b.data(), a.size());
}

double abs_diff_sum(std::span<const double> a, std::span<const double> b) {
  require_same_size(a.size(), b.size(), "abs_diff_sum");
  return active_backend() == Backend::avx2
             ? avx2::abs_diff_sum(a.data(), b.data(), a.size())
             : scalar::abs_diff_sum(a.data(), b.data(), a.size());
}

void matvec(std::span<const double> m, std::size_t rows, std::size_t cols,
            std::span<const double> x, std::span<double> y) {
  require_same_size(m.size(), rows * cols, "matvec");
  require_same_size(x.size(), cols, "matvec");
  require_same_size(y.size(), rows, "matvec");
  if (active_backend() == Backend::avx2) {
    avx2::matvec(m.data(), rows, cols, x.data(), y.data());
  } else {
    scalar::matvec(m.data(), rows, cols, x.data(), y.data());
  }
}

void vecmat(std::span<const double> x, std::span<const double> m, std::size_t rows,
            std::size_t cols, std::span<double> y) {
  require_same_size(m.size(), rows * cols, "vecmat");
  require_same_size(x.size(), rows, "vecmat");
  require_same_size(y.size(), cols, "vecmat");
  if (active_backend() == Backend::avx2) {
    avx2::vecmat(x.data(), m.data(), rows, cols, y.data());
  } else {
    scalar::vecmat(x.data(), m.data(), rows, cols, y.data());
  }
}

}  // namespace rbm::simd
