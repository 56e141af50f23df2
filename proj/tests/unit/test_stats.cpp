#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "adamfind/stats.hpp"

using namespace adamfind;

TEST(Estimates, MeanAndStderr) {
  const std::vector<double> xs{1, 2, 3, 4};
  const auto m = mean_estimate(xs);
  EXPECT_DOUBLE_EQ(m.value, 2.5);
  EXPECT_NEAR(m.stderr_, std::sqrt(5.0 / 3.0 / 4.0), 1e-15);
}

TEST(Estimates, Proportion) {
  const auto p = proportion_estimate(30, 100);
  EXPECT_DOUBLE_EQ(p.value, 0.3);
  EXPECT_NEAR(p.stderr_, std::sqrt(0.21 / 100), 1e-15);
  EXPECT_THROW(proportion_estimate(1, 0), std::invalid_argument);
  EXPECT_THROW(proportion_estimate(5, 4), std::invalid_argument);
}

TEST(Ks, OneSampleUniform) {
  // ECDF steps at 0.1, 0.5, 0.9 against U(0,1): largest gap 0.9 - 2/3
  const std::vector<double> xs{0.9, 0.1, 0.5};
  const double d = ks_one_sample(xs, [](double x) { return std::clamp(x, 0.0, 1.0); });
  EXPECT_NEAR(d, 0.9 - 2.0 / 3.0, 1e-15);
}

TEST(Ks, TwoSampleKnown) {
  EXPECT_DOUBLE_EQ(ks_two_sample({1, 2, 3}, {4, 5, 6}), 1.0);
  EXPECT_DOUBLE_EQ(ks_two_sample({1, 2, 3}, {1, 2, 3}), 0.0);
  EXPECT_NEAR(ks_two_sample({1, 2, 3, 4}, {3, 4, 5, 6}), 0.5, 1e-15);
  // ties across samples must not create a spurious gap
  EXPECT_DOUBLE_EQ(ks_two_sample({1, 1, 2, 2}, {1, 2}), 0.0);
}

TEST(Ks, CriticalValues) {
  // c(0.05) = 1.3581
  EXPECT_NEAR(ks_one_sample_critical(10000, 0.05), 1.3581015157 / 100, 1e-9);
  EXPECT_NEAR(ks_two_sample_critical(100, 100, 0.05), 1.3581015157 * std::sqrt(0.02), 1e-9);
}

TEST(Ols, ExactLine) {
  const std::vector<double> x{1, 2, 3, 4, 5};
  const std::vector<double> y{3, 5, 7, 9, 11};
  const auto fit = ols_fit(x, y);
  EXPECT_NEAR(fit.slope, 2.0, 1e-14);
  EXPECT_NEAR(fit.intercept, 1.0, 1e-13);
  EXPECT_NEAR(fit.slope_stderr, 0.0, 1e-12);
  EXPECT_EQ(fit.points, 5u);
}

TEST(Ols, ConfidenceInterval) {
  // y = x + noise; slope stderr by hand: s² = SSE/(n-2), se = s/√Sxx
  const std::vector<double> x{0, 1, 2, 3};
  const std::vector<double> y{0.1, 0.9, 2.2, 2.8};
  const auto fit = ols_fit(x, y);
  EXPECT_NEAR(fit.slope, 0.94, 1e-12);
  // residuals 0.01, -0.13, 0.23, -0.11; SSE = 0.082, Sxx = 5
  EXPECT_NEAR(fit.slope_stderr, std::sqrt(0.082 / 2.0 / 5.0), 1e-12);
  EXPECT_NEAR(fit.slope_hi - fit.slope, student_t_quantile(0.05, 2) * fit.slope_stderr, 1e-12);
  EXPECT_NEAR(fit.slope - fit.slope_lo, fit.slope_hi - fit.slope, 1e-12);
}

TEST(Ols, RejectsDegenerate) {
  const std::vector<double> one{1};
  EXPECT_THROW(ols_fit(one, one), std::invalid_argument);
  const std::vector<double> same{2, 2, 2};
  const std::vector<double> y{1, 2, 3};
  EXPECT_THROW(ols_fit(same, y), std::invalid_argument);
}

TEST(Spearman, RanksAndTies) {
  const std::vector<double> x{1, 2, 3, 4, 5};
  EXPECT_NEAR(spearman(x, std::vector<double>{2, 4, 6, 8, 100}), 1.0, 1e-15);
  EXPECT_NEAR(spearman(x, std::vector<double>{5, 4, 3, 2, 1}), -1.0, 1e-15);
  // scipy.stats.spearmanr([1,2,3,4,5],[1,3,2,3,5]) = 0.8207826816681233
  EXPECT_NEAR(spearman(x, std::vector<double>{1, 3, 2, 3, 5}), 0.8207826816681233, 1e-12);
  EXPECT_TRUE(std::isnan(spearman(x, std::vector<double>{1, 1, 1, 1, 1})));
}

TEST(Quantile, Type7) {
  const std::vector<double> xs{1, 2, 3, 4};
  EXPECT_DOUBLE_EQ(quantile_sorted(xs, 0.0), 1.0);
  EXPECT_DOUBLE_EQ(quantile_sorted(xs, 1.0), 4.0);
  EXPECT_DOUBLE_EQ(quantile_sorted(xs, 0.5), 2.5);
  EXPECT_NEAR(quantile_sorted(xs, 0.9), 3.7, 1e-15);
}

TEST(StudentT, Quantiles) {
  EXPECT_NEAR(student_t_quantile(0.05, 10), 2.228138851986274, 1e-12);
  EXPECT_NEAR(student_t_quantile(0.05, 1e9), 1.959963984540054, 1e-6);
}
