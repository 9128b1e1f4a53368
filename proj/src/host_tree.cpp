#include "acp/host_tree.hpp"

#include <random>
#include <stdexcept>

namespace acp {

HostTree::HostTree(double beta, std::size_t node_cap) : beta_(beta), node_cap_(node_cap) {
  if (!(beta >= 0.0)) throw std::invalid_argument("beta must be non-negative");
  if (node_cap == 0) throw std::invalid_argument("node cap must be at least 1");
  push_node(no_parent);
}

Node HostTree::push_node(Node parent) {
  const auto id = static_cast<Node>(parent_.size());
  parent_.push_back(parent);
  first_child_.push_back(0);
  child_count_.push_back(0);
  depth_.push_back(parent == no_parent ? 0 : depth_[parent] + 1);
  expanded_.push_back(0);
  ++unexpanded_;
  return id;
}

HostTree HostTree::from_children_counts(std::span<const std::uint32_t> counts) {
  if (counts.empty()) throw std::invalid_argument("a tree needs at least one node");
  HostTree tree;
  tree.node_cap_ = counts.size();
  tree.push_node(no_parent);
  for (Node v = 0; v < counts.size(); ++v) {
    if (v >= tree.size()) throw std::invalid_argument("children counts describe a forest");
    tree.first_child_[v] = static_cast<Node>(tree.size());
    tree.child_count_[v] = counts[v];
    tree.expanded_[v] = 1;
    --tree.unexpanded_;
    for (std::uint32_t i = 0; i < counts[v]; ++i) {
      if (tree.size() >= counts.size())
        throw std::invalid_argument("children counts exceed the node count");
      tree.push_node(v);
    }
  }
  return tree;
}

bool HostTree::expand(Node v, Rng& rng) {
  if (expanded_[v]) return true;
  const std::uint32_t k =
      beta_ > 0.0 ? std::poisson_distribution<std::uint32_t>(beta_)(rng) : 0u;
  if (size() + k > node_cap_) {
    capped_ = true;
    return false;
  }
  first_child_[v] = static_cast<Node>(size());
  child_count_[v] = k;
  expanded_[v] = 1;
  --unexpanded_;
  for (std::uint32_t i = 0; i < k; ++i) push_node(v);
  return true;
}

HostTree sample_gw_tree(double beta, std::size_t node_cap, Rng& rng) {
  HostTree tree(beta, node_cap);
  // Ids are assigned in expansion order, so a linear scan is breadth-first.
  for (Node v = 0; v < tree.size(); ++v)
    if (!tree.expand(v, rng)) break;
  return tree;
}

}  // namespace acp
