// limit_laws.hpp: samplers and numerical oracles for limiting degree laws.
//
// Densities on their supports:
//   β(u,v):  Γ(u+v)/(Γ(u)Γ(v)) · x^{u-1} (1-x)^{v-1},   0 < x < 1
//   GG(u,v): v/Γ(u/v) · x^{u-1} e^{-x^v},                x > 0
//
// GG sampling: if G ~ Gamma(u/v, 1) then Z = G^{1/v} has density
//   f_G(z^v) · v z^{v-1} = z^{u-v} e^{-z^v} / Γ(u/v) · v z^{v-1}
//                        = v/Γ(u/v) · z^{u-1} e^{-z^v},
// which is GG(u,v).
//
// Beta sampling: B = G_u / (G_u + G_v) with independent unit-scale gammas.
#pragma once

#include <cstdint>
#include <limits>
#include <variant>

#include "adamfind/rng.hpp"

namespace adamfind {

struct BetaParams {
  double u = 1.0;
  double v = 1.0;
};

struct GGParams {
  double u = 1.0;
  double v = 1.0;
};

using LimitDistribution = std::variant<BetaParams, GGParams>;

/// Limit of (D_1, D_2).
struct JointLimitSample {
  double d1 = 0.0;
  double d2 = 0.0;
};

/// Degree m of some vertex observed at time k; requires 2(k-1) > m >= 1.
struct ConditionalLimitParams {
  std::uint64_t k = 2;
  std::uint64_t m = 1;
};

void validate(const BetaParams& p);
void validate(const GGParams& p);
void validate(const ConditionalLimitParams& p);

/// Gamma(shape, 1) by Marsaglia–Tsang; shape < 1 uses the U^{1/shape} boost.
double sample_gamma(double shape, Rng& rng);

double sample_beta(const BetaParams& p, Rng& rng);
double sample_gg(const GGParams& p, Rng& rng);

/// Which existing vertex the third vertex attached to.
enum class ThirdAttachment { ToEve, ToAdam };

/// (b1·b2·z, (1-b1)·b2·z).
inline JointLimitSample combine_adam_eve(double b1, double b2, double z) noexcept {
  return {b1 * b2 * z, (1.0 - b1) * b2 * z};
}

/// (D_1, D_2) in the limit given vertex 3 attached to Eve (vertex 2):
/// B1 ~ β(1,2), B2 ~ β(3,1), Z3 ~ GG(5,2) independent. ToAdam swaps roles.
JointLimitSample sample_adam_eve_limit(Rng& rng,
                                       ThirdAttachment given = ThirdAttachment::ToEve);

/// (1 - B)·Z with B ~ β(2(k-1) - m, m), Z ~ GG(2k-1, 2) independent: the
/// limit of D_i(n) given d_i(k) = m.
double sample_limit_degree_conditional(const ConditionalLimitParams& p, Rng& rng);

/// E[(1 - B_(m,k)) Z_k] = m/(2(k-1)) · Γ(k)/Γ((2k-1)/2).
double conditional_limit_mean(const ConditionalLimitParams& p);
/// E[X²] = m(m+1)/(2(k-1)(2k-1)) · Γ((2k+1)/2)/Γ((2k-1)/2).
double conditional_limit_second_moment(const ConditionalLimitParams& p);

/// CDF by regularized incomplete beta / gamma. GG(u,v): γ(u/v, x^v)/Γ(u/v).
double analytic_cdf(const LimitDistribution& dist, double x);

inline constexpr double kNoThreshold = std::numeric_limits<double>::infinity();

/// P(B1·B2·Z3 <= t1 and (1-B1)·B2·Z3 <= t2) under the Adam–Eve limit law,
/// by quadrature. Either threshold may be kNoThreshold.
double adam_eve_joint_cdf(double t1, double t2);

/// P(D1 <= eps^a and D2 <= eps^b | vertex 3 ~ vertex 2), by quadrature.
/// Requires eps in (0,1) and a >= b >= 0. Absolute error below 1e-9.
double joint_tail_probability(double a, double b, double eps);

/// Largest z retained by the quadrature; GG(5,2) mass beyond it is < 1e-24.
inline constexpr double kQuadratureZMax = 8.0;

}  // namespace adamfind
