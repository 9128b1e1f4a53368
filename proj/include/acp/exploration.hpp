#pragma once

#include <cstdint>
#include <unordered_map>
#include <vector>

#include "acp/contact_graph.hpp"
#include "acp/simulator.hpp"

namespace acp {

/// Adaptive contact process generated lazily alongside the infection.
///
/// Only edges with at least one revealed endpoint are materialized; every
/// other pair is still an independent Bernoulli(beta/n) coin that nobody has
/// looked at. A vertex is revealed when infection first crosses a half-edge
/// into it and is unrevealed again when it updates while healthy.
class ExplorationEpidemic {
 public:
  using Event = DynamicGraphEpidemic::Event;

  ExplorationEpidemic(const Params& params, Rng& rng);

  Event step(Rng& rng);

  double time() const { return time_; }
  std::uint64_t events() const { return events_; }
  std::size_t infected_count() const { return graph_.infected_count(); }
  std::uint64_t ever_infected_count() const { return ever_count_; }
  std::uint64_t peak_infected() const { return peak_; }
  std::size_t revealed_count() const { return revealed_.size(); }
  std::uint64_t claimed_count() const { return claimed_count_; }
  /// Vertices materialized so far (touched by the exploration).
  std::size_t tracked_count() const { return graph_.size(); }

  /// Revealed ⊆ ever infected, infected ⊆ revealed, revealed ⊆ claimed,
  /// every stored edge touches a revealed vertex, plus graph consistency.
  bool consistent() const;

 private:
  Vertex local(std::uint32_t global);
  bool is_revealed_global(std::uint32_t global) const;
  void infect(Vertex v, Rng& rng);
  void reveal(Vertex v, Rng& rng);
  void connect(Vertex a, Vertex b);
  void claim(Vertex v);
  void update_infected(Vertex v, Rng& rng);
  void update_healthy(Vertex v, Rng& rng);

  Params params_;
  ContactGraph graph_;
  std::vector<std::uint32_t> global_of_;
  std::unordered_map<std::uint32_t, Vertex> local_of_;
  std::vector<std::uint8_t> revealed_flag_;
  std::vector<std::uint8_t> ever_flag_;
  std::vector<std::uint8_t> claimed_flag_;
  IndexedSet revealed_;
  std::vector<std::uint32_t> scratch_;
  std::uint64_t ever_count_ = 0;
  std::uint64_t claimed_count_ = 0;
  std::uint64_t peak_ = 0;
  std::uint64_t events_ = 0;
  double time_ = 0.0;
};

/// Lazy-reveal counterpart of run_trajectory(adaptive) from a single infected vertex.
TrajectoryStats run_exploration_trajectory(const Params& params, const StopRule& stop, Rng& rng);

}  // namespace acp
