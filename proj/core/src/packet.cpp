#include "adamfind/packet.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <ostream>
#include <queue>
#include <stdexcept>
#include <string>

namespace adamfind {

namespace {

void check_epsilon(double epsilon) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) {
    throw std::invalid_argument("epsilon must lie in (0, 1), got " + std::to_string(epsilon));
  }
}

}  // namespace

Score score_cutoff(double alpha_n, double epsilon) {
  const long double scale =
      static_cast<long double>(alpha_n) * std::sqrt(std::numbers::pi_v<long double>);
  const long double threshold = static_cast<long double>(epsilon) * scale * scale * scale;
  if (threshold <= 0.0L) return 0;
  return static_cast<Score>(static_cast<std::uint64_t>(std::floor(threshold)));
}

bool edge_score_exceeds(std::uint64_t d_i, std::uint64_t d_j, double alpha_n,
                        double epsilon) {
  return edge_score(d_i, d_j) > score_cutoff(alpha_n, epsilon);
}

bool EpsilonPacket::contains(VertexId v) const {
  return std::binary_search(members.begin(), members.end(), v);
}

std::vector<VertexId> packet_members(std::span<const std::pair<VertexId, VertexId>> edges,
                                     std::span<const std::uint32_t> degree,
                                     double alpha_n, double epsilon) {
  check_epsilon(epsilon);
  const Score cutoff = score_cutoff(alpha_n, epsilon);
  std::vector<bool> in(degree.size(), false);
  for (const auto& [i, j] : edges) {
    if (edge_score(degree[i], degree[j]) > cutoff) {
      in[i] = true;
      in[j] = true;
    }
  }
  std::vector<VertexId> members;
  for (std::size_t v = 1; v < in.size(); ++v) {
    if (in[v]) members.push_back(static_cast<VertexId>(v));
  }
  return members;
}

EpsilonPacket epsilon_packet(const GrowingTree& tree, double epsilon) {
  check_epsilon(epsilon);
  EpsilonPacket packet{epsilon, tree.size(), {}};
  if (tree.size() < 2) return packet;
  const Score cutoff = score_cutoff(tree.alpha(), epsilon);
  const auto best = best_incident_scores(tree);
  for (VertexId v = 1; v <= tree.size(); ++v) {
    if (best[v] > cutoff) packet.members.push_back(v);
  }
  return packet;
}

std::vector<Score> best_incident_scores(const GrowingTree& tree) {
  const VertexId n = tree.size();
  const auto degree = tree.degrees();
  const auto parent = tree.parents();
  std::vector<Score> best(static_cast<std::size_t>(n) + 1, 0);
  for (VertexId i = 2; i <= n; ++i) {
    const VertexId p = parent[i];
    const Score s = edge_score(degree[i], degree[p]);
    if (s > best[i]) best[i] = s;
    if (s > best[p]) best[p] = s;
  }
  return best;
}

std::vector<VertexId> top_k_degree(const GrowingTree& tree, std::uint64_t k,
                                   std::uint64_t seed) {
  const VertexId n = tree.size();
  if (k == 0) throw std::invalid_argument("top_k_degree: k must be >= 1");
  if (k > n) {
    throw std::invalid_argument("top_k_degree: k = " + std::to_string(k) +
                                " exceeds tree size " + std::to_string(n));
  }
  const auto degree = tree.degrees();
  std::vector<std::uint32_t> sorted(degree.begin() + 1, degree.end());
  std::nth_element(sorted.begin(), sorted.begin() + static_cast<std::ptrdiff_t>(k - 1),
                   sorted.end(), std::greater<>());
  const std::uint32_t kth = sorted[k - 1];

  std::vector<VertexId> chosen;
  std::vector<VertexId> tied;
  chosen.reserve(k);
  for (VertexId v = 1; v <= n; ++v) {
    if (degree[v] > kth) chosen.push_back(v);
    else if (degree[v] == kth) tied.push_back(v);
  }
  Rng rng(seed);
  const std::size_t need = k - chosen.size();
  for (std::size_t t = 0; t < need; ++t) {
    const std::size_t pick = t + rng.below(tied.size() - t);
    std::swap(tied[t], tied[pick]);
    chosen.push_back(tied[t]);
  }
  std::sort(chosen.begin(), chosen.end());
  return chosen;
}

std::vector<std::uint64_t> checkpoint_grid(std::uint64_t n_target, double ratio) {
  if (n_target < 2) throw std::invalid_argument("checkpoint_grid: n_target must be >= 2");
  if (!(ratio > 1.0) || !std::isfinite(ratio)) {
    throw std::invalid_argument("checkpoint ratio must be a finite value > 1");
  }
  std::vector<std::uint64_t> grid;
  double x = 2.0;
  while (x < static_cast<double>(n_target)) {
    const auto c = static_cast<std::uint64_t>(std::ceil(x));
    if (c >= n_target) break;
    if (grid.empty() || c > grid.back()) grid.push_back(c);
    x *= ratio;
  }
  grid.push_back(n_target);
  return grid;
}

void TrajectoryRecord::record(std::uint64_t n, std::uint64_t size, bool root_member) {
  checkpoints.push_back(n);
  sizes.push_back(size);
  root_in.push_back(root_member);
  running_max_size = std::max(running_max_size, size);
  if (n >= 2 && !root_member) root_always_in = false;
}

void record_checkpoint(const GrowingTree& tree, std::span<const double> epsilons,
                       std::span<TrajectoryRecord> records) {
  const VertexId n = tree.size();
  std::vector<Score> cutoffs;
  cutoffs.reserve(epsilons.size());
  for (double e : epsilons) cutoffs.push_back(score_cutoff(tree.alpha(), e));
  std::vector<std::uint64_t> counts(epsilons.size(), 0);
  const auto best = best_incident_scores(tree);
  for (VertexId v = 1; v <= n; ++v) {
    const Score s = best[v];
    for (std::size_t t = 0; t < cutoffs.size(); ++t) counts[t] += s > cutoffs[t];
  }
  for (std::size_t t = 0; t < records.size(); ++t) {
    records[t].record(n, counts[t], n >= 2 && best[1] > cutoffs[t]);
  }
}

std::vector<TrajectoryRecord> packet_trajectories(std::uint64_t n_target,
                                                  std::span<const double> epsilons,
                                                  double checkpoint_ratio,
                                                  std::uint64_t seed) {
  for (double e : epsilons) check_epsilon(e);
  const auto grid = checkpoint_grid(n_target, checkpoint_ratio);
  std::vector<TrajectoryRecord> records(epsilons.size());
  for (std::size_t t = 0; t < epsilons.size(); ++t) records[t].epsilon = epsilons[t];
  GrowingTree tree(seed);
  tree.reserve(n_target);
  for (std::uint64_t c : grid) {
    tree.grow_to(c);
    record_checkpoint(tree, epsilons, records);
  }
  return records;
}

TrajectoryRecord packet_trajectory(std::uint64_t n_target, double epsilon,
                                   double checkpoint_ratio, std::uint64_t seed) {
  const double eps[] = {epsilon};
  return std::move(packet_trajectories(n_target, eps, checkpoint_ratio, seed).front());
}

TrajectoryRecord exact_packet_trajectory(std::uint64_t n_target, double epsilon,
                                         std::uint64_t seed) {
  check_epsilon(epsilon);
  if (n_target < 2) throw std::invalid_argument("exact_packet_trajectory: n_target must be >= 2");

  GrowingTree tree(seed);
  tree.reserve(n_target);
  tree.grow_to(2);

  const auto slots = static_cast<std::size_t>(n_target) + 1;
  std::vector<Score> best(slots, 0);
  std::vector<bool> member(slots, false);
  using Entry = std::pair<Score, VertexId>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> heap;
  std::uint64_t size = 0;
  std::vector<VertexId> touched;

  TrajectoryRecord record;
  record.epsilon = epsilon;
  record.checkpoints.reserve(n_target - 1);
  record.sizes.reserve(n_target - 1);

  auto settle = [&](Score cutoff) {
    for (VertexId w : touched) {
      if (best[w] <= cutoff) continue;
      if (!member[w]) {
        member[w] = true;
        ++size;
      }
      heap.emplace(best[w], w);
    }
    while (!heap.empty() && heap.top().first <= cutoff) {
      const auto [s, w] = heap.top();
      heap.pop();
      if (!member[w] || s != best[w]) continue;
      member[w] = false;
      --size;
    }
    record.record(tree.size(), size, member[1]);
  };

  best[1] = best[2] = edge_score(1, 1);
  touched = {1, 2};
  settle(score_cutoff(tree.alpha(), epsilon));

  while (tree.size() < n_target) {
    const VertexId u = tree.attach_step();
    const auto degree = tree.degrees();
    touched.clear();
    touched.push_back(u);
    tree.for_each_neighbor(u, [&](VertexId w) {
      const Score s = edge_score(degree[u], degree[w]);
      if (s > best[w]) {
        best[w] = s;
        touched.push_back(w);
      }
      if (s > best[u]) best[u] = s;
    });
    settle(score_cutoff(tree.alpha(), epsilon));
  }
  return record;
}

void write_packet_list(const EpsilonPacket& packet, std::ostream& out) {
  for (VertexId v : packet.members) out << v << '\n';
}

void write_packet_json(const EpsilonPacket& packet, std::ostream& out) {
  out << '[';
  for (std::size_t t = 0; t < packet.members.size(); ++t) {
    if (t) out << ',';
    out << packet.members[t];
  }
  out << "]\n";
}

void write_trajectory_csv(const TrajectoryRecord& record, std::ostream& out) {
  out << "n,size,root_in\n";
  for (std::size_t t = 0; t < record.checkpoints.size(); ++t) {
    out << record.checkpoints[t] << ',' << record.sizes[t] << ','
        << (record.root_in[t] ? "true" : "false") << '\n';
  }
}

}  // namespace adamfind
