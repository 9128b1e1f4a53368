#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "acp/rng.hpp"

namespace acp {

using Node = std::uint32_t;

/// Poisson Galton-Watson tree generated on demand. Node 0 is the root; the
/// children of a node are a contiguous id block appended when it is expanded.
class HostTree {
 public:
  static constexpr Node no_parent = 0xffffffffu;

  HostTree(double beta, std::size_t node_cap);

  /// Fully expanded tree; counts[i] is the number of children of node i in
  /// breadth-first order. Throws std::invalid_argument if the counts do not
  /// describe a single tree.
  static HostTree from_children_counts(std::span<const std::uint32_t> counts);

  std::size_t size() const { return parent_.size(); }
  double beta() const { return beta_; }
  std::size_t node_cap() const { return node_cap_; }

  Node parent(Node v) const { return parent_[v]; }
  bool expanded(Node v) const { return expanded_[v] != 0; }
  std::uint32_t child_count(Node v) const { return child_count_[v]; }
  Node first_child(Node v) const { return first_child_[v]; }
  std::uint32_t depth(Node v) const { return depth_[v]; }

  /// Draws the Pois(beta) children of v if not done yet. Returns false and
  /// sets capped() when that would push the tree past node_cap.
  bool expand(Node v, Rng& rng);

  bool capped() const { return capped_; }
  /// Every node expanded, so the tree is known completely.
  bool complete() const { return unexpanded_ == 0; }

 private:
  HostTree() = default;
  Node push_node(Node parent);

  double beta_ = 0.0;
  std::size_t node_cap_ = 0;
  std::vector<Node> parent_;
  std::vector<Node> first_child_;
  std::vector<std::uint32_t> child_count_;
  std::vector<std::uint32_t> depth_;
  std::vector<std::uint8_t> expanded_;
  std::size_t unexpanded_ = 0;
  bool capped_ = false;
};

/// Breadth-first expansion until the tree is complete or node_cap is hit.
HostTree sample_gw_tree(double beta, std::size_t node_cap, Rng& rng);

}  // namespace acp
