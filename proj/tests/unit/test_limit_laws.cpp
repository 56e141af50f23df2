#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "adamfind/limit_laws.hpp"
#include "adamfind/quadrature.hpp"
#include "adamfind/rng.hpp"
#include "adamfind/stats.hpp"

using namespace adamfind;

namespace {

constexpr std::size_t kDraws = 1000000;
constexpr double kKsBound = 0.002;

template <class Draw>
std::vector<double> draws(std::uint64_t seed, Draw&& draw, std::size_t count = kDraws) {
  Rng rng(seed);
  std::vector<double> xs(count);
  for (auto& x : xs) x = draw(rng);
  return xs;
}

}  // namespace

TEST(Rng, UniformRanges) {
  Rng rng(1);
  for (int i = 0; i < 100000; ++i) {
    const double u = rng.uniform();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    ASSERT_GT(rng.uniform_pos(), 0.0);
    ASSERT_LT(rng.below(7), 7u);
  }
}

TEST(Rng, DerivedSeedsDistinct) {
  std::vector<std::uint64_t> seeds;
  for (std::uint64_t i = 0; i < 100000; ++i) seeds.push_back(derive_seed(42, i));
  std::ranges::sort(seeds);
  EXPECT_EQ(std::ranges::adjacent_find(seeds), seeds.end());
  EXPECT_NE(derive_seed(1, 0), derive_seed(2, 0));
}

TEST(Rng, NormalMoments) {
  const auto xs = draws(3, [](Rng& r) { return r.normal(); });
  const auto m = mean_estimate(xs);
  EXPECT_NEAR(m.value, 0.0, 4 * m.stderr_);
  EXPECT_NEAR(m.stderr_ * std::sqrt(static_cast<double>(kDraws)), 1.0, 5e-3);
}

TEST(AnalyticCdf, KnownValues) {
  EXPECT_NEAR(analytic_cdf(BetaParams{1, 2}, 0.5), 0.75, 1e-14);
  EXPECT_NEAR(analytic_cdf(BetaParams{3, 1}, 0.5), 0.125, 1e-14);
  EXPECT_NEAR(analytic_cdf(BetaParams{2, 3}, 0.3), 0.3483, 1e-13);
  EXPECT_NEAR(analytic_cdf(GGParams{5, 2}, 1.0), 0.15085496391539038, 1e-13);
  EXPECT_NEAR(analytic_cdf(GGParams{3, 2}, 0.7), 0.19390879155004148, 1e-13);
  EXPECT_DOUBLE_EQ(analytic_cdf(GGParams{5, 2}, -1.0), 0.0);
  EXPECT_DOUBLE_EQ(analytic_cdf(BetaParams{1, 2}, 2.0), 1.0);
}

TEST(AnalyticCdf, BetaOneTwoClosedForm) {
  for (double x = 0.0; x <= 1.0; x += 0.05) {
    EXPECT_NEAR(analytic_cdf(BetaParams{1, 2}, x), 2 * x - x * x, 1e-14);
  }
}

TEST(Validation, RejectsBadParameters) {
  Rng rng(1);
  EXPECT_THROW(sample_beta(BetaParams{0, 1}, rng), std::invalid_argument);
  EXPECT_THROW(sample_beta(BetaParams{1, -1}, rng), std::invalid_argument);
  EXPECT_THROW(sample_gg(GGParams{5, 0}, rng), std::invalid_argument);
  EXPECT_THROW(sample_limit_degree_conditional({2, 2}, rng), std::invalid_argument);
  EXPECT_THROW(sample_limit_degree_conditional({1, 1}, rng), std::invalid_argument);
  EXPECT_THROW(sample_limit_degree_conditional({3, 0}, rng), std::invalid_argument);
  EXPECT_THROW(analytic_cdf(GGParams{-1, 2}, 1.0), std::invalid_argument);
}

struct BetaCase {
  double u, v;
};

class BetaKs : public ::testing::TestWithParam<BetaCase> {};

TEST_P(BetaKs, MatchesAnalyticCdf) {
  const BetaParams p{GetParam().u, GetParam().v};
  auto xs = draws(11, [&](Rng& r) { return sample_beta(p, r); });
  const double ks = ks_one_sample(xs, [&](double x) { return analytic_cdf(p, x); });
  EXPECT_LE(ks, kKsBound);
}

INSTANTIATE_TEST_SUITE_P(Shapes, BetaKs,
                         ::testing::Values(BetaCase{1, 2}, BetaCase{3, 1}, BetaCase{0.5, 0.5},
                                           BetaCase{1, 1}, BetaCase{17, 3}));

class GGKs : public ::testing::TestWithParam<BetaCase> {};

TEST_P(GGKs, MatchesAnalyticCdf) {
  const GGParams p{GetParam().u, GetParam().v};
  auto xs = draws(12, [&](Rng& r) { return sample_gg(p, r); });
  const double ks = ks_one_sample(xs, [&](double x) { return analytic_cdf(p, x); });
  EXPECT_LE(ks, kKsBound);
}

INSTANTIATE_TEST_SUITE_P(Shapes, GGKs,
                         ::testing::Values(BetaCase{5, 2}, BetaCase{3, 2}, BetaCase{1, 1},
                                           BetaCase{0.6, 2}, BetaCase{41, 2}));

TEST(GG, MeanOfFiveTwo) {
  const auto xs = draws(5, [](Rng& r) { return sample_gg(GGParams{5, 2}, r); });
  const auto m = mean_estimate(xs);
  // Γ(3)/Γ(5/2) = 8/(3√π)
  const double exact = 8.0 / (3.0 * std::sqrt(std::numbers::pi));
  EXPECT_NEAR(exact, 1.5045055561273502, 1e-14);
  EXPECT_NEAR(m.value, exact, 4 * m.stderr_);
}

TEST(ConditionalLimit, ClosedFormMoments) {
  EXPECT_NEAR(conditional_limit_mean({2, 1}), 1.0 / std::sqrt(std::numbers::pi), 1e-14);
  EXPECT_NEAR(conditional_limit_mean({5, 3}), 0.77374571457978, 1e-13);
  EXPECT_NEAR(conditional_limit_second_moment({5, 3}), 0.75, 1e-13);
  EXPECT_NEAR(conditional_limit_second_moment({2, 1}), 0.5, 1e-14);
}

TEST(ConditionalLimit, SampleMomentsMatch) {
  for (ConditionalLimitParams p : {ConditionalLimitParams{2, 1}, ConditionalLimitParams{10, 1},
                                   ConditionalLimitParams{5, 3}, ConditionalLimitParams{100, 1}}) {
    const auto xs = draws(p.k * 31 + p.m, [&](Rng& r) { return sample_limit_degree_conditional(p, r); });
    const auto m = mean_estimate(xs);
    EXPECT_NEAR(m.value, conditional_limit_mean(p), 4 * m.stderr_) << p.k << "," << p.m;
    std::vector<double> sq(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) sq[i] = xs[i] * xs[i];
    const auto m2 = mean_estimate(sq);
    EXPECT_NEAR(m2.value, conditional_limit_second_moment(p), 4 * m2.stderr_) << p.k << "," << p.m;
  }
}

TEST(ConditionalLimit, RootLawIsOneMinusBetaTimesGG) {
  // k=2, m=1: (1 - β(1,1))·GG(3,2), i.e. U·GG(3,2) with U uniform
  auto xs = draws(8, [](Rng& r) { return sample_limit_degree_conditional({2, 1}, r); });
  auto ys = draws(9, [](Rng& r) { return r.uniform_pos() * sample_gg(GGParams{3, 2}, r); });
  EXPECT_LE(ks_two_sample(xs, ys), ks_two_sample_critical(xs.size(), ys.size(), 0.001));
}

TEST(AdamEve, MarginalsAndSymmetry) {
  Rng rng(21);
  std::vector<double> d1, d2, b1;
  for (std::size_t i = 0; i < kDraws; ++i) {
    const auto s = sample_adam_eve_limit(rng);
    d1.push_back(s.d1);
    d2.push_back(s.d2);
    b1.push_back(s.d1 / (s.d1 + s.d2));
  }
  // share of Adam in the pair is β(1,2)
  EXPECT_LE(ks_one_sample(b1, [](double x) { return analytic_cdf(BetaParams{1, 2}, x); }), kKsBound);
  // E[D1] = E[B1]E[B2]E[Z3] = (1/3)(3/4)·8/(3√π)
  const double ez = 8.0 / (3.0 * std::sqrt(std::numbers::pi));
  const auto m1 = mean_estimate(d1);
  const auto m2 = mean_estimate(d2);
  EXPECT_NEAR(m1.value, ez / 4.0, 4 * m1.stderr_);
  EXPECT_NEAR(m2.value, ez / 2.0, 4 * m2.stderr_);

  Rng swapped_rng(21);
  const auto a = sample_adam_eve_limit(swapped_rng, ThirdAttachment::ToAdam);
  Rng same(21);
  const auto b = sample_adam_eve_limit(same, ThirdAttachment::ToEve);
  EXPECT_DOUBLE_EQ(a.d1, b.d2);
  EXPECT_DOUBLE_EQ(a.d2, b.d1);
}

TEST(AdamEve, Combine) {
  const auto s = combine_adam_eve(0.25, 0.5, 2.0);
  EXPECT_DOUBLE_EQ(s.d1, 0.25);
  EXPECT_DOUBLE_EQ(s.d2, 0.75);
}

TEST(Quadrature, Simpson) {
  EXPECT_NEAR(adaptive_simpson([](double x) { return std::sin(x); }, 0, std::numbers::pi, 1e-12), 2.0,
              1e-11);
  const std::vector<double> breaks{0.3};
  EXPECT_NEAR(integrate_piecewise([](double x) { return x < 0.3 ? 0.0 : 1.0; }, 0, 1, breaks, 1e-12),
              0.7, 1e-12);
}

TEST(Quadrature, TotalMassAndMarginals) {
  EXPECT_NEAR(adam_eve_joint_cdf(kNoThreshold, kNoThreshold), 1.0, 1e-10);
  EXPECT_NEAR(adam_eve_joint_cdf(0.5, kNoThreshold), 0.7201411061872922, 1e-9);
  EXPECT_NEAR(adam_eve_joint_cdf(kNoThreshold, 0.3), 0.14009566987079558, 1e-9);
}

TEST(Quadrature, JointTailValues) {
  // independent nested quadrature over (z, y) with the β(1,2) CDF inside
  EXPECT_NEAR(joint_tail_probability(1.0, 0.5, 0.2), 0.07625086248259022, 1e-9);
  EXPECT_NEAR(joint_tail_probability(1.0, 0.5, 0.1), 0.02096545264679212, 1e-9);
  EXPECT_NEAR(joint_tail_probability(1.0, 0.5, 0.05), 0.005458051728861415, 1e-9);
  EXPECT_NEAR(adam_eve_joint_cdf(std::sqrt(0.2), 0.2), 0.03504596312224116, 1e-9);
  EXPECT_NEAR(adam_eve_joint_cdf(std::sqrt(0.1), 0.1), 0.00673105183174425, 1e-9);
  EXPECT_NEAR(adam_eve_joint_cdf(std::sqrt(0.05), 0.05), 0.0012301945571660227, 1e-9);
}

TEST(Quadrature, RejectsBadArguments) {
  EXPECT_THROW(joint_tail_probability(0.5, 1.0, 0.1), std::invalid_argument);
  EXPECT_THROW(joint_tail_probability(1.0, 0.5, 1.0), std::invalid_argument);
  EXPECT_THROW(joint_tail_probability(1.0, -0.5, 0.5), std::invalid_argument);
}

TEST(Quadrature, AgreesWithMonteCarlo) {
  Rng rng(99);
  const double t1 = 0.3, t2 = 0.6;
  std::uint64_t hits = 0;
  const std::uint64_t n = 2000000;
  for (std::uint64_t i = 0; i < n; ++i) {
    const auto s = sample_adam_eve_limit(rng);
    hits += (s.d1 <= t1 && s.d2 <= t2);
  }
  const auto est = proportion_estimate(hits, n);
  EXPECT_NEAR(est.value, adam_eve_joint_cdf(t1, t2), 4 * est.stderr_);
}

TEST(Quadrature, AdamAloneScalesLinearly) {
  // P(D1 <= ε)/ε settles as ε shrinks
  double prev = adam_eve_joint_cdf(0.04, kNoThreshold) / 0.04;
  for (double eps : {0.02, 0.01}) {
    const double r = adam_eve_joint_cdf(eps, kNoThreshold) / eps;
    EXPECT_NEAR(r / prev, 1.0, 0.25);
    prev = r;
  }
}
