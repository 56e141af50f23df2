// packet.hpp: the ε-packet root-finding set and the top-k degree baseline.
//
// A vertex i belongs to the ε-packet of 𝒯(n) when some neighbor j satisfies
//   D_j(n)·D_i(n)² > ε   or   D_i(n)·D_j(n)² > ε,
// with D = d / (α_n √π). In raw degrees the edge condition reads
//   max(d_j·d_i², d_i·d_j²) > ε·(√π α_n)³,
// and since the left side is an integer it is equivalent to comparing against
// the integer cutoff ⌊ε·(√π α_n)³⌋. The cutoff is computed in long double;
// integer scores are exact in 128 bits for any n below 2^32.
#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <utility>
#include <vector>

#include "adamfind/ba_tree.hpp"

namespace adamfind {

using Score = unsigned __int128;

/// max(d_j·d_i², d_i·d_j²), exact.
inline Score edge_score(std::uint64_t d_i, std::uint64_t d_j) noexcept {
  const Score a = static_cast<Score>(d_i) * d_i * d_j;
  const Score b = static_cast<Score>(d_j) * d_j * d_i;
  return a > b ? a : b;
}

/// ⌊ε·(√π α_n)³⌋; an edge is in the packet iff its score exceeds this.
Score score_cutoff(double alpha_n, double epsilon);

/// Relative width of the band around ε·(√π α_n)³ inside which the long double
/// evaluation of the cutoff may disagree with exact real arithmetic.
inline constexpr double kThresholdGuardBand = 1e-12;

/// The edge condition for {i, j}. Symmetric in (d_i, d_j).
bool edge_score_exceeds(std::uint64_t d_i, std::uint64_t d_j, double alpha_n,
                        double epsilon);

struct EpsilonPacket {
  double epsilon = 0.0;
  std::uint64_t n = 0;
  std::vector<VertexId> members;  // sorted ascending

  bool contains(VertexId v) const;
  std::size_t size() const { return members.size(); }
};

/// Packet computed from an arbitrary edge list over vertices 1..vertex_count
/// with the given degrees (indexed by id, element 0 unused). Used directly for
/// relabeled trees; epsilon_packet() forwards here.
std::vector<VertexId> packet_members(std::span<const std::pair<VertexId, VertexId>> edges,
                                     std::span<const std::uint32_t> degree,
                                     double alpha_n, double epsilon);

/// ε ∈ (0,1). A single-vertex tree gives an empty packet.
EpsilonPacket epsilon_packet(const GrowingTree& tree, double epsilon);

/// For each vertex, the largest edge score over its incident edges (0 for an
/// isolated vertex). v is in the ε-packet iff best[v] > score_cutoff(α_n, ε).
std::vector<Score> best_incident_scores(const GrowingTree& tree);

/// The k highest-degree vertices, ties broken uniformly at random from `seed`.
/// Requires 1 <= k <= n. Result is sorted ascending.
std::vector<VertexId> top_k_degree(const GrowingTree& tree, std::uint64_t k,
                                   std::uint64_t seed);

/// Sizes 2, ⌈2r⌉, ⌈2r²⌉, … (duplicates dropped), always ending at n_target.
/// Requires n_target >= 2 and ratio > 1.
std::vector<std::uint64_t> checkpoint_grid(std::uint64_t n_target, double ratio);

struct TrajectoryRecord {
  double epsilon = 0.0;
  std::vector<std::uint64_t> checkpoints;
  std::vector<std::uint64_t> sizes;
  std::vector<bool> root_in;
  std::uint64_t running_max_size = 0;
  bool root_always_in = true;

  void record(std::uint64_t n, std::uint64_t size, bool root_member);
  std::uint64_t final_size() const { return sizes.empty() ? 0 : sizes.back(); }
};

/// Grow one tree to n_target and evaluate the ε-packet on the checkpoint grid.
TrajectoryRecord packet_trajectory(std::uint64_t n_target, double epsilon,
                                   double checkpoint_ratio, std::uint64_t seed);

/// Same tree, every ε in `epsilons` evaluated at each checkpoint. Element t of
/// the result belongs to epsilons[t].
std::vector<TrajectoryRecord> packet_trajectories(std::uint64_t n_target,
                                                  std::span<const double> epsilons,
                                                  double checkpoint_ratio,
                                                  std::uint64_t seed);

/// Evaluate every ε on `tree` as it stands and append to `records`.
void record_checkpoint(const GrowingTree& tree, std::span<const double> epsilons,
                       std::span<TrajectoryRecord> records);

/// Packet tracked at every n from 2 to n_target, maintained incrementally with
/// a min-heap of member scores and lazy invalidation. Checkpoints are 2..n_target.
TrajectoryRecord exact_packet_trajectory(std::uint64_t n_target, double epsilon,
                                         std::uint64_t seed);

/// Sorted ids, one per line.
void write_packet_list(const EpsilonPacket& packet, std::ostream& out);
/// JSON array of sorted ids.
void write_packet_json(const EpsilonPacket& packet, std::ostream& out);
/// "n,size,root_in" header plus one row per checkpoint.
void write_trajectory_csv(const TrajectoryRecord& record, std::ostream& out);

}  // namespace adamfind
