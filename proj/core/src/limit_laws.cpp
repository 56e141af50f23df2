#include "adamfind/limit_laws.hpp"

#include <array>
#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/math/special_functions/beta.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "adamfind/quadrature.hpp"

namespace adamfind {

namespace {

void require_positive_shapes(double u, double v, const char* what) {
  if (!(u > 0.0) || !(v > 0.0) || !std::isfinite(u) || !std::isfinite(v)) {
    throw std::invalid_argument(std::string(what) + ": shapes must be positive and finite, got (" +
                                std::to_string(u) + ", " + std::to_string(v) + ")");
  }
}

}  // namespace

void validate(const BetaParams& p) { require_positive_shapes(p.u, p.v, "beta"); }
void validate(const GGParams& p) { require_positive_shapes(p.u, p.v, "generalized gamma"); }

void validate(const ConditionalLimitParams& p) {
  if (p.k < 2 || p.m < 1 || 2 * (p.k - 1) <= p.m) {
    throw std::invalid_argument("conditional limit law needs 2(k-1) > m >= 1, got k=" +
                                std::to_string(p.k) + " m=" + std::to_string(p.m));
  }
}

double sample_gamma(double shape, Rng& rng) {
  if (!(shape > 0.0) || !std::isfinite(shape)) {
    throw std::invalid_argument("gamma: shape must be positive and finite");
  }
  if (shape < 1.0) {
    const double g = sample_gamma(shape + 1.0, rng);
    return g * std::pow(rng.uniform_pos(), 1.0 / shape);
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x, v;
    do {
      x = rng.normal();
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = rng.uniform_pos();
    const double x2 = x * x;
    if (u < 1.0 - 0.0331 * x2 * x2) return d * v;
    if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) return d * v;
  }
}

double sample_beta(const BetaParams& p, Rng& rng) {
  validate(p);
  for (;;) {
    const double x = sample_gamma(p.u, rng);
    const double y = sample_gamma(p.v, rng);
    const double b = x / (x + y);
    // both gammas can underflow to 0 for tiny shapes; redraw
    if (b > 0.0 && b < 1.0) return b;
  }
}

double sample_gg(const GGParams& p, Rng& rng) {
  validate(p);
  for (;;) {
    const double z = std::pow(sample_gamma(p.u / p.v, rng), 1.0 / p.v);
    if (z > 0.0) return z;
  }
}

JointLimitSample sample_adam_eve_limit(Rng& rng, ThirdAttachment given) {
  const double b1 = sample_beta({1.0, 2.0}, rng);
  const double b2 = sample_beta({3.0, 1.0}, rng);
  const double z3 = sample_gg({5.0, 2.0}, rng);
  const auto s = combine_adam_eve(b1, b2, z3);
  if (given == ThirdAttachment::ToAdam) return {s.d2, s.d1};
  return s;
}

double sample_limit_degree_conditional(const ConditionalLimitParams& p, Rng& rng) {
  validate(p);
  const double k = static_cast<double>(p.k);
  const double m = static_cast<double>(p.m);
  const double b = sample_beta({2.0 * (k - 1.0) - m, m}, rng);
  const double z = sample_gg({2.0 * k - 1.0, 2.0}, rng);
  return (1.0 - b) * z;
}

double conditional_limit_mean(const ConditionalLimitParams& p) {
  validate(p);
  const double k = static_cast<double>(p.k);
  const double m = static_cast<double>(p.m);
  return m / (2.0 * (k - 1.0)) * std::exp(std::lgamma(k) - std::lgamma((2.0 * k - 1.0) / 2.0));
}

double conditional_limit_second_moment(const ConditionalLimitParams& p) {
  validate(p);
  const double k = static_cast<double>(p.k);
  const double m = static_cast<double>(p.m);
  return m * (m + 1.0) / (2.0 * (k - 1.0) * (2.0 * k - 1.0)) *
         std::exp(std::lgamma((2.0 * k + 1.0) / 2.0) - std::lgamma((2.0 * k - 1.0) / 2.0));
}

double analytic_cdf(const LimitDistribution& dist, double x) {
  if (std::isnan(x)) throw std::invalid_argument("analytic_cdf: x is NaN");
  return std::visit(
      [x](const auto& p) -> double {
        validate(p);
        using P = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<P, BetaParams>) {
          if (x <= 0.0) return 0.0;
          if (x >= 1.0) return 1.0;
          return boost::math::ibeta(p.u, p.v, x);
        } else {
          if (x <= 0.0) return 0.0;
          const double t = std::pow(x, p.v);
          if (!std::isfinite(t)) return 1.0;
          return boost::math::gamma_p(p.u / p.v, t);
        }
      },
      dist);
}

namespace {

// P(B1 <= t1/s and 1 - B1 <= t2/s) for B1 ~ β(1,2), whose CDF is 2x - x².
double adam_share_window(double s, double t1, double t2) {
  if (s <= 0.0) return 1.0;
  const double hi = std::isinf(t1) ? 1.0 : std::min(1.0, t1 / s);
  const double lo = std::isinf(t2) ? 0.0 : std::max(0.0, 1.0 - t2 / s);
  if (hi <= lo) return 0.0;
  return (2.0 * hi - hi * hi) - (2.0 * lo - lo * lo);
}

std::vector<double> kinks(double t1, double t2) {
  std::vector<double> k;
  if (std::isfinite(t1)) k.push_back(t1);
  if (std::isfinite(t2)) k.push_back(t2);
  if (std::isfinite(t1) && std::isfinite(t2)) k.push_back(t1 + t2);
  return k;
}

}  // namespace

double adam_eve_joint_cdf(double t1, double t2) {
  if (std::isnan(t1) || std::isnan(t2)) throw std::invalid_argument("adam_eve_joint_cdf: NaN threshold");
  if (t1 <= 0.0 || t2 <= 0.0) return 0.0;
  const auto s_kinks = kinks(t1, t2);
  const double gg_norm = 2.0 / std::tgamma(2.5);

  auto inner = [&](double z) {
    if (z <= 0.0) return 1.0;
    std::vector<double> breaks;
    for (double c : s_kinks) breaks.push_back(c / z);
    auto integrand = [&](double y) { return 3.0 * y * y * adam_share_window(y * z, t1, t2); };
    return integrate_piecewise(integrand, 0.0, 1.0, breaks, 1e-14);
  };
  auto outer = [&](double z) { return gg_norm * std::pow(z, 4) * std::exp(-z * z) * inner(z); };
  return integrate_piecewise(outer, 0.0, kQuadratureZMax, s_kinks, 1e-12);
}

double joint_tail_probability(double a, double b, double eps) {
  if (!(eps > 0.0 && eps < 1.0)) throw std::invalid_argument("joint_tail_probability: eps must lie in (0,1)");
  if (!(b >= 0.0) || !(a >= b) || !std::isfinite(a)) {
    throw std::invalid_argument("joint_tail_probability: need a >= b >= 0");
  }
  return adam_eve_joint_cdf(std::pow(eps, a), std::pow(eps, b));
}

}  // namespace adamfind
