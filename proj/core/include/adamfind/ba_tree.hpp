// ba_tree.hpp: Barabási–Albert preferential-attachment tree process.
//
// Vertices are labeled 1..n in arrival order. Vertex n+1 attaches to an
// existing vertex with probability proportional to its degree, which is
// realized by drawing a uniform entry of the flat endpoint array (every edge
// contributes both of its ends).
//
// Memory layout, with VertexId = uint32_t:
//   parent, degree, first_child, next_sibling : 4 B each per vertex
//   endpoints                                 : 8 B per vertex
// for 24 B/vertex when capacity is reserved up front.
#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "adamfind/rng.hpp"

namespace adamfind {

using VertexId = std::uint32_t;
inline constexpr VertexId kNoVertex = 0;

/// α_n = ∏_{k=1}^{n-2} (1 + 1/(2k)), with α_2 = 1. Throws for n < 2.
double alpha_of(std::uint64_t n);

/// Renormalized degrees D_i(n) = d_i(n) / (α_n √π), indexed by vertex id.
/// Index 0 is unused and holds 0.
class NormalizedDegreeView {
 public:
  NormalizedDegreeView(std::vector<double> values, double scale)
      : values_(std::move(values)), scale_(scale) {}

  double operator[](VertexId i) const { return values_[i]; }
  std::size_t vertex_count() const { return values_.size() - 1; }
  std::span<const double> values() const { return values_; }
  /// α_n √π, the factor that maps D_i back to d_i.
  double scale() const { return scale_; }

 private:
  std::vector<double> values_;
  double scale_;
};

class GrowingTree {
 public:
  /// 𝒯(1): a single vertex. α is reported as 1 until the tree has an edge.
  explicit GrowingTree(std::uint64_t seed);

  /// Rebuild a tree from parent labels: parents[i] for 2 <= i < parents.size()
  /// must satisfy 1 <= parents[i] < i. parents[0] and parents[1] are ignored.
  /// The RNG of the result is seeded with `seed` for further growth.
  static GrowingTree from_parents(std::span<const VertexId> parents,
                                  std::uint64_t seed = 0);

  /// Grow 𝒯(n_target) from scratch. Throws std::invalid_argument for 0.
  static GrowingTree grow(std::uint64_t n_target, std::uint64_t seed);

  /// Grow 𝒯(n_target) conditioned on vertex 3 attaching to `third_parent`
  /// (1 or 2), by rejecting and redrawing the first random attachment.
  static GrowingTree grow_conditioned(std::uint64_t n_target,
                                      std::uint64_t seed,
                                      VertexId third_parent);

  /// Add vertex n+1 and return the vertex it attached to. Requires n >= 2;
  /// throws std::logic_error otherwise (the 1 -> 2 step is forced).
  VertexId attach_step();

  /// Grow to n_target vertices (no-op when already that large).
  void grow_to(std::uint64_t n_target);

  void reserve(std::uint64_t n_target);

  VertexId size() const { return n_; }
  double alpha() const { return alpha_; }

  VertexId parent(VertexId i) const { return parent_[i]; }
  std::uint32_t degree(VertexId i) const { return degree_[i]; }

  /// Degrees indexed by vertex id; element 0 is unused.
  std::span<const std::uint32_t> degrees() const { return degree_; }
  /// Parents indexed by vertex id; elements 0 and 1 are kNoVertex.
  std::span<const VertexId> parents() const { return parent_; }
  std::span<const VertexId> endpoints() const { return endpoints_; }

  /// Parent first (if any), then children, most recent child first.
  std::vector<VertexId> neighbors(VertexId i) const;

  template <class F>
  void for_each_neighbor(VertexId i, F&& f) const {
    if (parent_[i] != kNoVertex) f(parent_[i]);
    for (VertexId c = first_child_[i]; c != kNoVertex; c = next_sibling_[c]) {
      f(c);
    }
  }

  template <class F>
  void for_each_child(VertexId i, F&& f) const {
    for (VertexId c = first_child_[i]; c != kNoVertex; c = next_sibling_[c]) {
      f(c);
    }
  }

  NormalizedDegreeView normalized_degrees() const;

  /// Bytes held by the tree's arrays (capacity, not size).
  std::size_t memory_bytes() const;

 private:
  void link(VertexId child, VertexId target);
  void unlink_last();

  Rng rng_;
  VertexId n_ = 1;
  double alpha_ = 1.0;
  std::vector<VertexId> parent_;
  std::vector<std::uint32_t> degree_;
  std::vector<VertexId> first_child_;
  std::vector<VertexId> next_sibling_;
  std::vector<VertexId> endpoints_;
};

/// Free-function spelling of GrowingTree::grow.
inline GrowingTree grow(std::uint64_t n_target, std::uint64_t seed) {
  return GrowingTree::grow(n_target, seed);
}

inline NormalizedDegreeView normalized_degrees(const GrowingTree& tree) {
  return tree.normalized_degrees();
}

/// Checked neighbor query; throws std::invalid_argument for i outside [1, n].
std::vector<VertexId> neighbors(const GrowingTree& tree, VertexId i);

enum class ExportFormat { EdgeList, GraphML, Dot };

/// "edge-list", "graphml" or "dot"; throws std::invalid_argument otherwise.
ExportFormat parse_export_format(std::string_view name);
std::string_view to_string(ExportFormat format);

void export_tree(const GrowingTree& tree, ExportFormat format, std::ostream& out);
std::string export_tree(const GrowingTree& tree, ExportFormat format);

/// Parse "i<TAB>parent" lines back into a parent sequence indexed by vertex
/// id (see GrowingTree::from_parents). Edges may appear in any order, but
/// must cover 2..n exactly once with parent < child.
std::vector<VertexId> parse_edge_list(std::istream& in);
std::vector<VertexId> parse_edge_list(std::string_view text);

}  // namespace adamfind
