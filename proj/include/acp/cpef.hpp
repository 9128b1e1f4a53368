#pragma once

#include <cstdint>
#include <limits>

#include "acp/host_tree.hpp"
#include "acp/rng.hpp"
#include "acp/simulator.hpp"

namespace acp {

struct HostOutcome {
  std::uint64_t ever_infected = 0;
  /// Updates fired by vertices that were infected at the time.
  std::uint64_t meta_offspring = 0;
  double duration = 0.0;
  /// Node cap or infection cap reached before the host infection died out.
  bool capped = false;
};

struct HostLimits {
  std::uint64_t max_ever_infected = std::numeric_limits<std::uint64_t>::max();
  std::uint64_t max_events = std::numeric_limits<std::uint64_t>::max();
};

/// SIS on one host tree started from an infected root. Vertices with an
/// infected neighbour update at rate kappa; an updating vertex leaves the
/// tree, and if it was infected it counts as one meta-offspring.
HostOutcome run_host_infection(HostTree& tree, double lambda, double kappa, Rng& rng,
                               const HostLimits& limits = {});

struct CpefParams {
  double lambda = 1.0;
  double kappa = 1.0;
  double beta = 3.0;
};

struct CpefBudgets {
  std::uint64_t total_infected = 1'000'000;
  std::uint64_t meta_nodes = 1'000'000;
  std::size_t node_cap = 1'000'000;
};

struct CpefOutcome {
  std::uint64_t total_ever_infected = 0;
  std::uint64_t trees_infected = 0;
  Termination termination = Termination::extinct;
  std::uint32_t max_meta_depth = 0;
};

/// Breadth-first run of the meta Galton-Watson tree of host infections.
/// The per-host ever-infected sets are summed, so a vertex that moves to a
/// new host is counted once in each.
CpefOutcome run_cpef(const CpefParams& params, const CpefBudgets& budgets, Rng& rng);

struct MetaOffspringEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::uint64_t samples = 0;
  std::uint64_t capped_hosts = 0;
};

MetaOffspringEstimate estimate_meta_offspring(const CpefParams& params, std::uint64_t samples,
                                              Rng& rng, std::size_t node_cap = 1'000'000);

}  // namespace acp
