#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "acp/contact_graph.hpp"
#include "acp/rng.hpp"

namespace acp {

enum class Mode { adaptive, nonadaptive };
enum class Termination { extinct, epidemic, budget_exceeded };

std::string_view to_string(Mode mode);
std::string_view to_string(Termination t);
Mode parse_mode(std::string_view text);

/// Model parameters for the finite-N dynamic Erdős–Rényi contact process.
struct Params {
  std::uint32_t n = 1000;
  double beta = 3.0;    // mean degree; edge probability beta / n
  double lambda = 1.0;  // per-edge transmission rate
  double kappa = 1.0;   // update rate
  double epsilon = 0.05;

  /// Throws std::invalid_argument on any violated constraint.
  void validate() const;
  double edge_probability() const { return beta / n; }
  /// Smallest ever-infected count that counts as an epidemic (>= epsilon * n).
  std::uint64_t epidemic_size() const;
};

struct StopRule {
  bool stop_on_epidemic = true;
  std::uint64_t event_budget = 100'000'000;
};

struct TrajectoryStats {
  std::uint64_t ever_infected_count = 0;
  std::optional<double> extinction_time;
  std::uint64_t peak_infected = 0;
  Termination termination = Termination::extinct;
  std::uint64_t events_processed = 0;
  double end_time = 0.0;
};

/// Dynamic graph plus infection history.
struct SimState {
  ContactGraph graph;
  std::vector<std::uint8_t> ever_infected;
  std::uint64_t ever_infected_count = 0;
  double time = 0.0;

  bool consistent() const;
};

/// G(n, beta/n) with no infection. Throws std::invalid_argument if n == 0 or beta > n.
SimState sample_er_graph(std::uint32_t n, double beta, Rng& rng);

/// Deletes every edge at v and reconnects v to each other vertex independently
/// with probability beta / n.
void resample_neighborhood(ContactGraph& graph, Vertex v, double beta, Rng& rng);

/// Draws `count` distinct vertices of [0, n) \ {exclude} uniformly.
void sample_distinct_partners(std::uint32_t n, Vertex exclude, std::uint64_t count, Rng& rng,
                              std::vector<Vertex>& out);

/// Exact event-driven simulation of the adaptive / non-adaptive contact
/// process. One call to step() realizes one CTMC transition.
class DynamicGraphEpidemic {
 public:
  enum class Event { recovery, transmission, update, none };

  DynamicGraphEpidemic(const Params& params, Mode mode, Rng& rng);

  void seed(std::span<const Vertex> initial);
  /// Advances by one event; returns Event::none when no transition is possible.
  Event step(Rng& rng);
  double total_rate() const;

  const SimState& state() const { return state_; }
  const Params& params() const { return params_; }
  Mode mode() const { return mode_; }
  std::uint64_t peak_infected() const { return peak_; }
  std::uint64_t events() const { return events_; }

 private:
  void infect(Vertex v);

  Params params_;
  Mode mode_;
  SimState state_;
  std::binomial_distribution<std::uint64_t> degree_dist_;
  std::vector<Vertex> scratch_;
  std::uint64_t peak_ = 0;
  std::uint64_t events_ = 0;
};

TrajectoryStats run_trajectory(const Params& params, Mode mode, std::span<const Vertex> initial,
                               const StopRule& stop, Rng& rng);

}  // namespace acp
