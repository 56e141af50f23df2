// stats.hpp: small estimators shared by the experiment harness and tests.
#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace adamfind {

struct Estimate {
  double value = 0.0;
  double stderr_ = 0.0;
};

/// Sample mean and standard error of the mean (n-1 variance).
Estimate mean_estimate(std::span<const double> xs);

/// Proportion successes/trials with binomial standard error √(p(1-p)/n).
/// Throws std::invalid_argument for zero trials or successes > trials.
Estimate proportion_estimate(std::uint64_t successes, std::uint64_t trials);

/// Sup-distance between the empirical CDF of `samples` and `cdf`.
double ks_one_sample(std::vector<double> samples, const std::function<double(double)>& cdf);

/// Two-sample Kolmogorov–Smirnov statistic. Ties are handled by advancing
/// both samples past equal values before measuring the gap.
double ks_two_sample(std::vector<double> a, std::vector<double> b);

/// Asymptotic critical value c(α)·√((n+m)/(n·m)), c = √(-ln(α/2)/2).
double ks_two_sample_critical(std::size_t n, std::size_t m, double alpha);
/// One-sample version, c(α)/√n.
double ks_one_sample_critical(std::size_t n, double alpha);

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_stderr = 0.0;
  /// 95% interval from the t distribution with n-2 degrees of freedom.
  double slope_lo = 0.0;
  double slope_hi = 0.0;
  std::size_t points = 0;
};

/// Ordinary least squares y = intercept + slope·x. Needs at least 2 points
/// with distinct x; throws std::invalid_argument otherwise.
LinearFit ols_fit(std::span<const double> x, std::span<const double> y);

/// Spearman rank correlation with average ranks for ties. NaN when either
/// input is constant.
double spearman(std::span<const double> x, std::span<const double> y);

/// Linear-interpolation quantile (type 7) of an ascending-sorted sample.
double quantile_sorted(std::span<const double> sorted, double p);

/// Two-sided Student t quantile t_{1-α/2, dof}.
double student_t_quantile(double alpha, double dof);

}  // namespace adamfind
