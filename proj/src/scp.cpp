#include "acp/scp.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <stdexcept>

namespace acp {

SubtreeContactProcess::SubtreeContactProcess(const HostTree& tree, double lambda, double rho)
    : tree_(tree), lambda_(lambda), rho_(rho) {
  if (!tree.complete()) throw std::invalid_argument("subtree process needs a complete tree");
  if (!(lambda >= 0.0)) throw std::invalid_argument("lambda must be non-negative");
  if (!(rho >= 1.0)) throw std::invalid_argument("rho must be at least 1");
  recoverable_.reserve_ids(tree.size());
  frontier_.reserve_ids(tree.size());
  reset_to_root();
}

void SubtreeContactProcess::reset_empty() {
  infected_.assign(tree_.size(), 0);
  infected_children_.assign(tree_.size(), 0);
  ever_.assign(tree_.size(), 0);
  recoverable_.clear();
  frontier_.clear();
  count_ = 0;
  ever_count_ = 0;
  frontier_.insert(0);
}

void SubtreeContactProcess::reset_to_root() {
  reset_empty();
  infect(0);
}

void SubtreeContactProcess::infect(Node v) {
  assert(!infected_[v]);
  infected_[v] = 1;
  ++count_;
  if (!ever_[v]) {
    ever_[v] = 1;
    ++ever_count_;
  }
  frontier_.erase(v);
  recoverable_.insert(v);
  const Node p = tree_.parent(v);
  if (p != HostTree::no_parent && infected_children_[p]++ == 0) recoverable_.erase(p);
  const Node first = tree_.first_child(v);
  for (Node c = first; c < first + tree_.child_count(v); ++c) frontier_.insert(c);
}

void SubtreeContactProcess::recover(Node v) {
  assert(infected_[v] && infected_children_[v] == 0);
  infected_[v] = 0;
  --count_;
  recoverable_.erase(v);
  const Node first = tree_.first_child(v);
  for (Node c = first; c < first + tree_.child_count(v); ++c) frontier_.erase(c);
  // The parent is infected (or v is the root, below the extra vertex), so v rejoins the frontier.
  frontier_.insert(v);
  const Node p = tree_.parent(v);
  if (p != HostTree::no_parent && --infected_children_[p] == 0) recoverable_.insert(p);
}

double SubtreeContactProcess::exit_rate() const {
  const double base = static_cast<double>(recoverable_.size()) +
                      lambda_ * static_cast<double>(frontier_.size());
  return base * std::pow(rho_, -static_cast<double>(count_));
}

double SubtreeContactProcess::step(Rng& rng) {
  const double total = exit_rate();
  if (!(total > 0.0)) return std::numeric_limits<double>::infinity();
  const double hold = exponential(rng, total);
  const double recoveries = static_cast<double>(recoverable_.size());
  const double u = uniform01(rng) * (recoveries + lambda_ * static_cast<double>(frontier_.size()));
  if (u < recoveries || frontier_.empty()) {
    recover(recoverable_.sample(rng));
  } else {
    infect(frontier_.sample(rng));
  }
  return hold;
}

std::uint64_t SubtreeContactProcess::state_mask() const {
  if (tree_.size() > 64) throw std::logic_error("state mask needs at most 64 nodes");
  std::uint64_t mask = 0;
  for (Node v = 0; v < tree_.size(); ++v)
    if (infected_[v]) mask |= std::uint64_t{1} << v;
  return mask;
}

bool SubtreeContactProcess::consistent() const {
  std::size_t count = 0;
  for (Node v = 0; v < tree_.size(); ++v) {
    const Node p = tree_.parent(v);
    std::uint32_t kids = 0;
    const Node first = tree_.first_child(v);
    for (Node c = first; c < first + tree_.child_count(v); ++c) kids += infected_[c];
    if (kids != infected_children_[v]) return false;
    if (infected_[v]) {
      ++count;
      if (p != HostTree::no_parent && !infected_[p]) return false;
      if (recoverable_.contains(v) != (kids == 0) || frontier_.contains(v)) return false;
    } else {
      const bool parent_infected = p == HostTree::no_parent || infected_[p];
      if (frontier_.contains(v) != parent_infected || recoverable_.contains(v)) return false;
    }
  }
  return count == count_;
}

ScpOutcome run_scp(const HostTree& tree, double lambda, double rho, Rng& rng,
                   std::uint64_t max_events) {
  SubtreeContactProcess scp(tree, lambda, rho);
  ScpOutcome out;
  while (scp.infected_count() > 0) {
    if (out.path_states_visited >= max_events)
      throw std::runtime_error("subtree process exceeded its event budget");
    out.recovery_time += scp.step(rng);
    ++out.path_states_visited;
    assert(scp.consistent());
  }
  out.ever_infected = scp.ever_infected();
  return out;
}

std::map<std::uint64_t, double> scp_occupation(const HostTree& tree, double lambda, double rho,
                                               double t_end, Rng& rng) {
  SubtreeContactProcess scp(tree, lambda, rho);
  std::map<std::uint64_t, double> occupation;
  double t = 0.0;
  while (t < t_end) {
    const std::uint64_t mask = scp.state_mask();
    const double hold = scp.step(rng);
    occupation[mask] += std::min(hold, t_end - t);
    t += hold;
  }
  return occupation;
}

CoupledCounts coupled_scp_contact(const HostTree& tree, double lambda, Rng& rng) {
  if (!tree.complete()) throw std::invalid_argument("coupling needs a complete tree");
  const std::size_t n = tree.size();
  // Clocks: n recovery marks (rate 1), one arrow per directed tree edge
  // (rate lambda each), and the arrow from the extra vertex into the root.
  std::vector<std::uint8_t> scp(n, 0);
  std::vector<std::uint8_t> cp(n, 0);
  std::vector<std::uint32_t> scp_kids(n, 0);
  std::vector<std::uint8_t> scp_ever(n, 0);
  std::vector<std::uint8_t> cp_ever(n, 0);
  scp[0] = cp[0] = scp_ever[0] = cp_ever[0] = 1;
  std::size_t scp_count = 1;
  CoupledCounts out{1, 1};
  const double edges = static_cast<double>(2 * (n - 1) + 1);
  const double total = static_cast<double>(n) + lambda * edges;
  auto infect = [&](std::vector<std::uint8_t>& set, std::vector<std::uint8_t>& ever,
                    std::uint64_t& ever_count, Node v) {
    set[v] = 1;
    if (!ever[v]) {
      ever[v] = 1;
      ++ever_count;
    }
  };
  while (scp_count > 0) {
    const double u = uniform01(rng) * total;
    if (u < static_cast<double>(n)) {
      const auto v = static_cast<Node>(std::min<double>(std::floor(u), static_cast<double>(n - 1)));
      cp[v] = 0;
      if (scp[v] && scp_kids[v] == 0) {
        scp[v] = 0;
        --scp_count;
        if (tree.parent(v) != HostTree::no_parent) --scp_kids[tree.parent(v)];
      }
      continue;
    }
    // Arrow index 0 is the extra vertex into the root; 2c-1 / 2c are child c's
    // arrows up and down.
    const auto arrow = static_cast<std::uint64_t>(
        std::min(std::floor((u - static_cast<double>(n)) / lambda), edges - 1.0));
    Node from = 0;
    Node to = 0;
    bool from_extra = false;
    if (arrow == 0) {
      from_extra = true;
    } else {
      const auto c = static_cast<Node>((arrow + 1) / 2);
      if (arrow % 2 == 1) {
        from = c;
        to = tree.parent(c);
      } else {
        from = tree.parent(c);
        to = c;
      }
    }
    if ((from_extra || scp[from]) && !scp[to]) {
      infect(scp, scp_ever, out.subtree_process, to);
      ++scp_count;
      if (tree.parent(to) != HostTree::no_parent) ++scp_kids[tree.parent(to)];
    }
    if (!from_extra && cp[from]) infect(cp, cp_ever, out.contact_process, to);
  }
  return out;
}

PartitionValue exact_subtree_partition(const HostTree& tree, double weight) {
  if (!(weight >= 0.0)) throw std::invalid_argument("weight must be non-negative");
  // Children always carry larger ids than their parent, so a reverse scan is post-order.
  std::vector<double> f(tree.size(), 0.0);
  for (std::size_t i = tree.size(); i-- > 0;) {
    const auto v = static_cast<Node>(i);
    double prod = weight;
    if (tree.expanded(v)) {
      const Node first = tree.first_child(v);
      for (Node c = first; c < first + tree.child_count(v); ++c) prod *= 1.0 + f[c];
    }
    f[v] = prod;
  }
  PartitionValue z{1.0 + f[0], false};
  if (!std::isfinite(z.value)) {
    z.value = std::numeric_limits<double>::infinity();
    z.overflow = true;
  }
  return z;
}

std::vector<std::uint64_t> subtree_size_counts(const HostTree& tree) {
  // poly[v][k]: subtrees rooted at v with k nodes.
  std::vector<std::vector<std::uint64_t>> poly(tree.size());
  for (std::size_t i = tree.size(); i-- > 0;) {
    const auto v = static_cast<Node>(i);
    std::vector<std::uint64_t> acc{0, 1};
    if (tree.expanded(v)) {
      const Node first = tree.first_child(v);
      for (Node c = first; c < first + tree.child_count(v); ++c) {
        const auto& child = poly[c];  // child[0] = 0; the "absent" option adds 1 at k=0
        std::vector<std::uint64_t> next(acc.size() + child.size() - 1, 0);
        for (std::size_t a = 0; a < acc.size(); ++a) {
          next[a] += acc[a];
          for (std::size_t b = 1; b < child.size(); ++b) next[a + b] += acc[a] * child[b];
        }
        acc = std::move(next);
      }
    }
    poly[v] = std::move(acc);
  }
  auto counts = poly[0];
  counts[0] = 1;
  return counts;
}

}  // namespace acp
