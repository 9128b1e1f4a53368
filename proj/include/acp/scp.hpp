#pragma once

#include <cstdint>
#include <limits>
#include <map>
#include <vector>

#include "acp/host_tree.hpp"
#include "acp/rng.hpp"
#include "acp/samplers.hpp"

namespace acp {

/// Contact process on a finite tree in which the infection always stays a
/// subtree containing the root: an extra, permanently infected vertex hangs
/// above the root, and an infected vertex may only recover once all of its
/// children are healthy. With slowdown base rho > 1 every exit rate from a
/// state T is multiplied by rho^-|T|.
class SubtreeContactProcess {
 public:
  /// Throws std::invalid_argument unless the tree is complete, rho >= 1 and lambda >= 0.
  SubtreeContactProcess(const HostTree& tree, double lambda, double rho);

  /// Starts (or restarts) from {root}.
  void reset_to_root();
  void reset_empty();

  /// One jump; returns the holding time spent in the state before it.
  double step(Rng& rng);

  std::size_t infected_count() const { return count_; }
  bool infected(Node v) const { return infected_[v] != 0; }
  std::uint64_t ever_infected() const { return ever_count_; }
  double exit_rate() const;
  /// Bit i set iff node i is infected; requires at most 64 nodes.
  std::uint64_t state_mask() const;
  /// Infected set is a root-containing subtree and the rate sets match it.
  bool consistent() const;

 private:
  void infect(Node v);
  void recover(Node v);

  const HostTree& tree_;
  double lambda_;
  double rho_;
  std::vector<std::uint8_t> infected_;
  std::vector<std::uint32_t> infected_children_;
  std::vector<std::uint8_t> ever_;
  IndexedSet recoverable_;
  IndexedSet frontier_;
  std::size_t count_ = 0;
  std::uint64_t ever_count_ = 0;
};

struct ScpOutcome {
  double recovery_time = 0.0;
  std::uint64_t ever_infected = 0;
  std::uint64_t path_states_visited = 0;
};

/// From {root} until the infected set is first empty.
ScpOutcome run_scp(const HostTree& tree, double lambda, double rho, Rng& rng,
                   std::uint64_t max_events = std::numeric_limits<std::uint64_t>::max());

/// Time spent in each state (as a node bitmask) over [0, t_end], started from {root}.
std::map<std::uint64_t, double> scp_occupation(const HostTree& tree, double lambda, double rho,
                                               double t_end, Rng& rng);

struct CoupledCounts {
  std::uint64_t subtree_process = 0;
  std::uint64_t contact_process = 0;
};

/// Runs the subtree process (rho = 1) and the plain contact process from the
/// infected root on one shared graphical construction, until the subtree
/// process first empties. Returns both ever-infected counts.
CoupledCounts coupled_scp_contact(const HostTree& tree, double lambda, Rng& rng);

struct PartitionValue {
  double value = 0.0;
  bool overflow = false;
};

/// Sum over the empty set and every root-containing subtree T of weight^|T|.
/// Unexpanded nodes are treated as leaves.
PartitionValue exact_subtree_partition(const HostTree& tree, double weight);

/// Coefficient k counts root-containing subtrees with k nodes (k = 0 is the
/// empty state). Exact integer DP, for small trees.
std::vector<std::uint64_t> subtree_size_counts(const HostTree& tree);

}  // namespace acp
