#include "enumeration.hpp"

#include <functional>

#include <boost/math/constants/constants.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_int.hpp>

namespace acceptance {

namespace {

using Big = boost::multiprecision::cpp_bin_float_50;
using Rational = boost::multiprecision::cpp_rational;

// α_m as an exact fraction: ∏_{k=1}^{m-2} (2k+1)/(2k).
Rational alpha_exact(std::uint64_t m) {
  Rational a = 1;
  for (std::uint64_t k = 1; k + 2 <= m; ++k) a *= Rational(2 * k + 1, 2 * k);
  return a;
}

// members of the packet of the tree given by parents[2..m]
std::vector<bool> packet_of(const std::vector<std::uint64_t>& parents, std::uint64_t m, double eps) {
  std::vector<std::uint64_t> deg(m + 1, 0);
  for (std::uint64_t v = 2; v <= m; ++v) {
    ++deg[v];
    ++deg[parents[v]];
  }
  const Big scale = Big(alpha_exact(m)) * boost::multiprecision::sqrt(boost::math::constants::pi<Big>());
  const Big e(eps);
  std::vector<bool> in(m + 1, false);
  for (std::uint64_t v = 2; v <= m; ++v) {
    const Big di = Big(deg[v]) / scale, dj = Big(deg[parents[v]]) / scale;
    if (di * di * dj > e || dj * dj * di > e) in[v] = in[parents[v]] = true;
  }
  return in;
}

}  // namespace

ExactMembership enumerate_membership(std::uint64_t n, double epsilon) {
  ExactMembership out;
  out.epsilon = epsilon;
  out.n = n;
  std::vector<Rational> vertex_in(n + 1, Rational(0));
  Rational always(0);

  std::vector<std::uint64_t> parents(n + 1, 0);
  std::vector<std::uint64_t> deg(n + 1, 0);
  std::function<void(std::uint64_t, Rational, bool)> rec = [&](std::uint64_t v, Rational weight,
                                                              bool root_so_far) {
    // the tree currently has v-1 vertices
    if (v > 1 + 1) root_so_far = root_so_far && packet_of(parents, v - 1, epsilon)[1];
    if (v > n) {
      ++out.histories;
      const auto in = packet_of(parents, n, epsilon);
      for (std::uint64_t u = 1; u <= n; ++u) {
        if (in[u]) vertex_in[u] += weight;
      }
      if (root_so_far) always += weight;
      return;
    }
    if (v == 2) {
      parents[2] = 1;
      ++deg[1];
      ++deg[2];
      rec(3, weight, root_so_far);
      --deg[1];
      --deg[2];
      return;
    }
    const std::uint64_t total = 2 * (v - 2);
    for (std::uint64_t p = 1; p < v; ++p) {
      parents[v] = p;
      ++deg[p];
      ++deg[v];
      rec(v + 1, weight * Rational(deg[p] - 1, total), root_so_far);
      --deg[p];
      --deg[v];
    }
  };
  rec(2, Rational(1), true);

  out.vertex_in.assign(n + 1, 0.0);
  out.vertex_in_text.assign(n + 1, "");
  for (std::uint64_t u = 1; u <= n; ++u) {
    out.vertex_in[u] = static_cast<double>(vertex_in[u]);
    out.vertex_in_text[u] = vertex_in[u].str();
  }
  out.root_always_in = static_cast<double>(always);
  return out;
}

}  // namespace acceptance
