// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "rbm/core_stats.hpp"
#include "rbm/errors.hpp"
#include "rbm/simd.hpp"

using namespace rbm;

namespace {

std::vector<double> random_vector(RandomStream& s, std::size_t n) {
  std::vector<double> v(n);
  for (double& x : v) x = 2.0 * s.uniform() - 1.0;
  return v;
}

// Relative agreement allowing for reassociation of the sums.
void expect_close(double a, double b, double scale) {
  EXPECT_NEAR(a, b, 1e-13 * std::max(1.0, scale));
}

class SimdEquivalence : public ::testing::TestWithParam<std::size_t> {
 protected:
  void SetUp() override {
    if (!simd::avx2_supported()) GTEST_SKIP() << "CPU lacks AVX2/FMA";
  }
};

}  // namespace

TEST_P(SimdEquivalence, Dot) {
  RandomStream s = make_stream(GetParam());
  const auto a = random_vector(s, GetParam());
  const auto b = random_vector(s, GetParam());
  expect_close(simd::scalar::dot(a.data(), b.data(), a.size()),
               simd::avx2::dot(a.data(), b.data(), a.size()), static_cast<double>(a.size()));
}

TEST_P(SimdEquivalence, AbsDiffSum) {
  RandomStream s = make_stream(100 + GetParam());
  const auto a = random_vector(s, GetParam());
  const auto b = random_vector(s, GetParam());
  expect_close(simd::scalar::abs_diff_sum(a.data(), b.data(), a.size()),
               simd::avx2::abs_diff_sum(a.data(), b.data(), a.size()),
               static_cast<double>(a.size()));
}

TEST_P(SimdEquivalence, MatvecAndVecmat) {
  const std::size_t rows = GetParam();
  const std::size_t cols = GetParam() + 3;
  RandomStream s = make_stream(200 + GetParam());
  const auto m = random_vector(s, rows * cols);
  const auto x = random_vector(s, cols);
  const auto xr = random_vector(s, rows);
  std::vector<double> y1(rows), y2(rows), z1(cols), z2(cols);
  simd::scalar::matvec(m.data(), rows, cols, x.data(), y1.data());
  simd::avx2::matvec(m.data(), rows, cols, x.data(), y2.data());
  for (std::size_t i = 0; i < rows; ++i) expect_close(y1[i], y2[i], static_cast<double>(cols));
  simd::scalar::vecmat(xr.data(), m.data(), rows, cols, z1.data());
  simd::avx2::vecmat(xr.data(), m.data(), rows, cols, z2.data());
  for (std::size_t j = 0; j < cols; ++j) expect_close(z1[j], z2[j], static_cast<double>(rows));
}

INSTANTIATE_TEST_SUITE_P(Lengths, SimdEquivalence,
                         ::testing::Values(0, 1, 3, 4, 5, 7, 8, 9, 16, 31, 64, 257));

TEST(SimdReference, ScalarKernelsMatchNaiveLoops) {
  const std::vector<double> a{1.0, -2.0, 3.0};
  const std::vector<double> b{0.5, 0.5, -1.0};
  EXPECT_DOUBLE_EQ(simd::scalar::dot(a.data(), b.data(), 3), 0.5 - 1.0 - 3.0);
  EXPECT_DOUBLE_EQ(simd::scalar::abs_diff_sum(a.data(), b.data(), 3), 0.5 + 2.5 + 4.0);
  const std::vector<double> m{1, 2, 3, 4, 5, 6};  // 2 x 3
  std::vector<double> y(2), z(3);
  simd::scalar::matvec(m.data(), 2, 3, a.data(), y.data());
  EXPECT_DOUBLE_EQ(y[0], 1 - 4 + 9);
  EXPECT_DOUBLE_EQ(y[1], 4 - 10 + 18);
  const std::vector<double> r{1.0, -1.0};
  simd::scalar::vecmat(r.data(), m.data(), 2, 3, z.data());
  EXPECT_DOUBLE_EQ(z[0], -3);
  EXPECT_DOUBLE_EQ(z[1], -3);
  EXPECT_DOUBLE_EQ(z[2], -3);
}

TEST(SimdDispatch, ForceAndReset) {
  EXPECT_TRUE(simd::force_backend(simd::Backend::scalar));
  EXPECT_EQ(simd::active_backend(), simd::Backend::scalar);
  const std::vector<double> a{1, 2, 3, 4, 5};
  EXPECT_DOUBLE_EQ(simd::dot(a, a), 55.0);
  const bool have = simd::force_backend(simd::Backend::avx2);
  EXPECT_EQ(have, simd::avx2_supported());
  EXPECT_DOUBLE_EQ(simd::dot(a, a), 55.0);
  simd::reset_backend();
  EXPECT_EQ(simd::active_backend(),
            simd::avx2_supported() ? simd::Backend::avx2 : simd::Backend::scalar);
  EXPECT_STREQ(simd::backend_name(simd::Backend::avx2), "avx2");
}

TEST(SimdDispatch, SizeChecks) {
  const std::vector<double> a{1, 2};
  const std::vector<double> b{1};
  EXPECT_THROW(simd::dot(a, b), ArgumentError);
  EXPECT_THROW(simd::abs_diff_sum(a, b), ArgumentError);
  std::vector<double> y(1);
  EXPECT_THROW(simd::matvec(a, 2, 2, a, y), ArgumentError);
}
