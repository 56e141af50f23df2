#include "adamfind/ba_tree.hpp"

#include <cassert>
#include <charconv>
#include <cmath>
#include <istream>
#include <limits>
#include <numbers>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace adamfind {

double alpha_of(std::uint64_t n) {
  if (n < 2) throw std::invalid_argument("alpha_of: n must be >= 2");
  double alpha = 1.0;
  for (std::uint64_t k = 1; k + 2 <= n; ++k) {
    alpha *= 1.0 + 1.0 / (2.0 * static_cast<double>(k));
  }
  return alpha;
}

GrowingTree::GrowingTree(std::uint64_t seed) : rng_(seed) {
  parent_.assign(2, kNoVertex);
  degree_.assign(2, 0);
  first_child_.assign(2, kNoVertex);
  next_sibling_.assign(2, kNoVertex);
}

void GrowingTree::reserve(std::uint64_t n_target) {
  if (n_target > std::numeric_limits<VertexId>::max() - 1) {
    throw std::invalid_argument("tree size exceeds 32-bit vertex ids");
  }
  const auto slots = static_cast<std::size_t>(n_target) + 1;
  parent_.reserve(slots);
  degree_.reserve(slots);
  first_child_.reserve(slots);
  next_sibling_.reserve(slots);
  if (n_target >= 2) endpoints_.reserve(2 * (static_cast<std::size_t>(n_target) - 1));
}

void GrowingTree::link(VertexId child, VertexId target) {
  parent_.push_back(target);
  degree_.push_back(1);
  first_child_.push_back(kNoVertex);
  next_sibling_.push_back(first_child_[target]);
  first_child_[target] = child;
  ++degree_[target];
  endpoints_.push_back(target);
  endpoints_.push_back(child);
}

void GrowingTree::unlink_last() {
  const VertexId child = n_;
  const VertexId target = parent_[child];
  first_child_[target] = next_sibling_[child];
  --degree_[target];
  parent_.pop_back();
  degree_.pop_back();
  first_child_.pop_back();
  next_sibling_.pop_back();
  endpoints_.pop_back();
  endpoints_.pop_back();
  --n_;
  alpha_ /= 1.0 + 1.0 / (2.0 * static_cast<double>(n_ - 1));
}

VertexId GrowingTree::attach_step() {
  if (n_ < 2) throw std::logic_error("attach_step: tree must have at least 2 vertices");
  if (n_ == std::numeric_limits<VertexId>::max() - 1) {
    throw std::length_error("attach_step: vertex id space exhausted");
  }
  const VertexId target = endpoints_[rng_.below(endpoints_.size())];
  alpha_ *= 1.0 + 1.0 / (2.0 * static_cast<double>(n_ - 1));
  ++n_;
  link(n_, target);
  assert(endpoints_.size() == 2 * (static_cast<std::size_t>(n_) - 1));
  return target;
}

void GrowingTree::grow_to(std::uint64_t n_target) {
  if (n_target <= n_) return;
  reserve(n_target);
  if (n_ == 1) {
    n_ = 2;
    link(2, 1);
    alpha_ = 1.0;
  }
  while (n_ < n_target) attach_step();
}

GrowingTree GrowingTree::grow(std::uint64_t n_target, std::uint64_t seed) {
  if (n_target == 0) throw std::invalid_argument("grow: n_target must be >= 1");
  GrowingTree tree(seed);
  tree.grow_to(n_target);
  return tree;
}

GrowingTree GrowingTree::grow_conditioned(std::uint64_t n_target,
                                          std::uint64_t seed,
                                          VertexId third_parent) {
  if (n_target < 3) throw std::invalid_argument("grow_conditioned: n_target must be >= 3");
  if (third_parent != 1 && third_parent != 2) {
    throw std::invalid_argument("grow_conditioned: third_parent must be 1 or 2");
  }
  GrowingTree tree(seed);
  tree.grow_to(2);
  tree.reserve(n_target);
  while (tree.attach_step() != third_parent) tree.unlink_last();
  tree.grow_to(n_target);
  return tree;
}

GrowingTree GrowingTree::from_parents(std::span<const VertexId> parents,
                                      std::uint64_t seed) {
  GrowingTree tree(seed);
  const std::size_t n = parents.size() < 2 ? 1 : parents.size() - 1;
  tree.reserve(n);
  for (std::size_t i = 2; i <= n; ++i) {
    const VertexId p = parents[i];
    if (p < 1 || p >= i) {
      throw std::invalid_argument("from_parents: parent[" + std::to_string(i) +
                                  "] must lie in [1, " + std::to_string(i - 1) + "]");
    }
    if (i >= 3) tree.alpha_ *= 1.0 + 1.0 / (2.0 * static_cast<double>(i - 2));
    tree.n_ = static_cast<VertexId>(i);
    tree.link(static_cast<VertexId>(i), p);
  }
  return tree;
}

std::vector<VertexId> GrowingTree::neighbors(VertexId i) const {
  std::vector<VertexId> out;
  out.reserve(degree_[i]);
  for_each_neighbor(i, [&](VertexId j) { out.push_back(j); });
  return out;
}

NormalizedDegreeView GrowingTree::normalized_degrees() const {
  const double scale = alpha_ * std::sqrt(std::numbers::pi);
  std::vector<double> values(static_cast<std::size_t>(n_) + 1, 0.0);
  for (VertexId i = 1; i <= n_; ++i) values[i] = degree_[i] / scale;
  return {std::move(values), scale};
}

std::size_t GrowingTree::memory_bytes() const {
  return sizeof(VertexId) * (parent_.capacity() + first_child_.capacity() +
                             next_sibling_.capacity() + endpoints_.capacity()) +
         sizeof(std::uint32_t) * degree_.capacity();
}

std::vector<VertexId> neighbors(const GrowingTree& tree, VertexId i) {
  if (i < 1 || i > tree.size()) {
    throw std::invalid_argument("neighbors: vertex " + std::to_string(i) +
                                " out of range [1, " + std::to_string(tree.size()) + "]");
  }
  return tree.neighbors(i);
}

ExportFormat parse_export_format(std::string_view name) {
  if (name == "edge-list") return ExportFormat::EdgeList;
  if (name == "graphml") return ExportFormat::GraphML;
  if (name == "dot") return ExportFormat::Dot;
  throw std::invalid_argument("unknown export format '" + std::string(name) +
                              "' (expected edge-list, graphml or dot)");
}

std::string_view to_string(ExportFormat format) {
  switch (format) {
    case ExportFormat::EdgeList: return "edge-list";
    case ExportFormat::GraphML: return "graphml";
    case ExportFormat::Dot: return "dot";
  }
  return "?";
}

void export_tree(const GrowingTree& tree, ExportFormat format, std::ostream& out) {
  const VertexId n = tree.size();
  switch (format) {
    case ExportFormat::EdgeList:
      for (VertexId i = 2; i <= n; ++i) out << i << '\t' << tree.parent(i) << '\n';
      break;
    case ExportFormat::GraphML:
      out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
             "<graphml xmlns=\"http://graphml.graphdrawing.org/xmlns\">\n"
             "  <graph id=\"T\" edgedefault=\"undirected\">\n";
      for (VertexId i = 1; i <= n; ++i) out << "    <node id=\"n" << i << "\"/>\n";
      for (VertexId i = 2; i <= n; ++i) {
        out << "    <edge source=\"n" << i << "\" target=\"n" << tree.parent(i) << "\"/>\n";
      }
      out << "  </graph>\n</graphml>\n";
      break;
    case ExportFormat::Dot:
      out << "graph T {\n";
      for (VertexId i = 1; i <= n; ++i) out << "  " << i << ";\n";
      for (VertexId i = 2; i <= n; ++i) out << "  " << i << " -- " << tree.parent(i) << ";\n";
      out << "}\n";
      break;
  }
}

std::string export_tree(const GrowingTree& tree, ExportFormat format) {
  std::ostringstream os;
  export_tree(tree, format, os);
  return os.str();
}

namespace {

VertexId parse_id(std::string_view field, std::size_t line_no) {
  VertexId value = 0;
  const auto* first = field.data();
  const auto* last = field.data() + field.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last || value == 0) {
    throw std::invalid_argument("edge list line " + std::to_string(line_no) +
                                ": bad vertex id '" + std::string(field) + "'");
  }
  return value;
}

}  // namespace

std::vector<VertexId> parse_edge_list(std::istream& in) {
  std::vector<VertexId> parents(2, kNoVertex);
  std::string line;
  std::size_t line_no = 0;
  std::size_t edges = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos) {
      throw std::invalid_argument("edge list line " + std::to_string(line_no) +
                                  ": expected '<child>\\t<parent>'");
    }
    const std::string_view view(line);
    const VertexId child = parse_id(view.substr(0, tab), line_no);
    const VertexId par = parse_id(view.substr(tab + 1), line_no);
    if (child < 2 || par >= child) {
      throw std::invalid_argument("edge list line " + std::to_string(line_no) +
                                  ": need 1 <= parent < child");
    }
    if (parents.size() <= child) parents.resize(static_cast<std::size_t>(child) + 1, kNoVertex);
    if (parents[child] != kNoVertex) {
      throw std::invalid_argument("edge list: vertex " + std::to_string(child) +
                                  " listed twice");
    }
    parents[child] = par;
    ++edges;
  }
  if (edges + 2 != parents.size()) {
    throw std::invalid_argument("edge list: child ids must cover 2..n without gaps");
  }
  return parents;
}

std::vector<VertexId> parse_edge_list(std::string_view text) {
  std::istringstream is{std::string(text)};
  return parse_edge_list(is);
}

}  // namespace adamfind
