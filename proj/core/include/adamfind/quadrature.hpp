// quadrature.hpp: adaptive Simpson integration with known breakpoints.
#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

namespace adamfind {

namespace detail {

template <class F>
double simpson_step(F& f, double a, double fa, double b, double fb, double m, double fm,
                    double whole, double tol, int depth) {
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
  return simpson_step(f, a, fa, m, fm, lm, flm, left, 0.5 * tol, depth - 1) +
         simpson_step(f, m, fm, b, fb, rm, frm, right, 0.5 * tol, depth - 1);
}

}  // namespace detail

/// ∫_a^b f by adaptive Simpson with Richardson correction; `tol` is absolute.
/// The interval is pre-split into 8 panels so narrow features are not skipped
/// by the first coarse estimate.
template <class F>
double adaptive_simpson(F&& f, double a, double b, double tol, int max_depth = 48) {
  if (!(b > a)) return 0.0;
  constexpr int kPanels = 8;
  const double h = (b - a) / kPanels;
  double total = 0.0;
  for (int p = 0; p < kPanels; ++p) {
    const double lo = a + h * p;
    const double hi = p + 1 == kPanels ? b : lo + h;
    const double mid = 0.5 * (lo + hi);
    const double flo = f(lo), fhi = f(hi), fmid = f(mid);
    const double whole = (hi - lo) / 6.0 * (flo + 4.0 * fmid + fhi);
    total += detail::simpson_step(f, lo, flo, hi, fhi, mid, fmid, whole, tol / kPanels, max_depth);
  }
  return total;
}

/// Adaptive Simpson on [a, b] split at every breakpoint strictly inside it,
/// for integrands that are smooth between kinks.
template <class F>
double integrate_piecewise(F&& f, double a, double b, std::span<const double> breakpoints,
                           double tol) {
  std::vector<double> cuts{a};
  for (double c : breakpoints) {
    if (c > a && c < b) cuts.push_back(c);
  }
  cuts.push_back(b);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  const double piece_tol = tol / static_cast<double>(cuts.size() - 1);
  double total = 0.0;
  for (std::size_t t = 0; t + 1 < cuts.size(); ++t) {
    total += adaptive_simpson(f, cuts[t], cuts[t + 1], piece_tol);
  }
  return total;
}

template <class F>
double integrate_piecewise(F&& f, double a, double b, const std::vector<double>& breakpoints,
                           double tol) {
  return integrate_piecewise(std::forward<F>(f), a, b, std::span<const double>(breakpoints), tol);
}

}  // namespace adamfind
