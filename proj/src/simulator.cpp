#include "acp/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace acp {

std::string_view to_string(Mode mode) {
  return mode == Mode::adaptive ? "adaptive" : "nonadaptive";
}

std::string_view to_string(Termination t) {
  switch (t) {
    case Termination::extinct: return "extinct";
    case Termination::epidemic: return "epidemic";
    case Termination::budget_exceeded: return "budget_exceeded";
  }
  return "?";
}

Mode parse_mode(std::string_view text) {
  if (text == "adaptive") return Mode::adaptive;
  if (text == "nonadaptive" || text == "non-adaptive") return Mode::nonadaptive;
  throw std::invalid_argument("unknown mode '" + std::string(text) + "'");
}

void Params::validate() const {
  if (n == 0) throw std::invalid_argument("n must be at least 1");
  if (!(beta >= 0.0) || !(lambda >= 0.0) || !(kappa >= 0.0))
    throw std::invalid_argument("beta, lambda and kappa must be non-negative");
  if (beta > static_cast<double>(n))
    throw std::invalid_argument("beta / n must not exceed 1");
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw std::invalid_argument("epsilon must lie in (0,1)");
  if (epsilon * n < 1.0) throw std::invalid_argument("epsilon * n must be at least 1");
}

std::uint64_t Params::epidemic_size() const {
  return static_cast<std::uint64_t>(std::ceil(epsilon * n - 1e-9));
}

bool SimState::consistent() const {
  if (!graph.consistent()) return false;
  std::uint64_t count = 0;
  for (Vertex v = 0; v < graph.size(); ++v) {
    if (ever_infected[v]) ++count;
    if (graph.infected(v) && !ever_infected[v]) return false;
  }
  return count == ever_infected_count;
}

void sample_distinct_partners(std::uint32_t n, Vertex exclude, std::uint64_t count, Rng& rng,
                              std::vector<Vertex>& out) {
  out.clear();
  if (count == 0) return;
  const std::uint64_t pool = n - 1;
  if (count * 4 > pool) {
    // Selection sampling: each remaining vertex kept with probability needed/left.
    std::uint64_t needed = count;
    std::uint64_t left = pool;
    for (Vertex w = 0; w < n && needed > 0; ++w) {
      if (w == exclude) continue;
      if (uniform_index(rng, left) < needed) {
        out.push_back(w);
        --needed;
      }
      --left;
    }
    return;
  }
  while (out.size() < count) {
    auto w = static_cast<Vertex>(uniform_index(rng, n));
    if (w == exclude) continue;
    if (std::find(out.begin(), out.end(), w) != out.end()) continue;
    out.push_back(w);
  }
}

namespace {

void reconnect(ContactGraph& graph, Vertex v, std::uint64_t degree, Rng& rng,
               std::vector<Vertex>& scratch) {
  graph.isolate(v);
  sample_distinct_partners(static_cast<std::uint32_t>(graph.size()), v, degree, rng, scratch);
  for (Vertex w : scratch) graph.add_edge(v, w);
}

}  // namespace

SimState sample_er_graph(std::uint32_t n, double beta, Rng& rng) {
  if (n == 0) throw std::invalid_argument("n must be at least 1");
  if (!(beta >= 0.0) || beta > static_cast<double>(n))
    throw std::invalid_argument("beta must lie in [0, n]");
  SimState state{ContactGraph(n), std::vector<std::uint8_t>(n, 0), 0, 0.0};
  const double p = beta / n;
  if (p <= 0.0 || n < 2) return state;
  if (p >= 1.0) {
    for (Vertex v = 1; v < n; ++v)
      for (Vertex w = 0; w < v; ++w) state.graph.add_edge(v, w);
    return state;
  }
  // Geometric skipping over the pairs (v, w), w < v.
  const double log_q = std::log1p(-p);
  std::int64_t v = 1;
  std::int64_t w = -1;
  while (v < n) {
    const double r = uniform01(rng);
    w += 1 + static_cast<std::int64_t>(std::floor(std::log1p(-r) / log_q));
    while (w >= v && v < n) {
      w -= v;
      ++v;
    }
    if (v < n) state.graph.add_edge(static_cast<Vertex>(v), static_cast<Vertex>(w));
  }
  return state;
}

void resample_neighborhood(ContactGraph& graph, Vertex v, double beta, Rng& rng) {
  const auto n = static_cast<std::uint32_t>(graph.size());
  if (v >= n) throw std::invalid_argument("vertex out of range");
  if (!(beta >= 0.0) || beta > static_cast<double>(n))
    throw std::invalid_argument("beta must lie in [0, n]");
  std::binomial_distribution<std::uint64_t> degree(n - 1, beta / n);
  std::vector<Vertex> scratch;
  reconnect(graph, v, degree(rng), rng, scratch);
}

DynamicGraphEpidemic::DynamicGraphEpidemic(const Params& params, Mode mode, Rng& rng)
    : params_(params),
      mode_(mode),
      state_((params.validate(), sample_er_graph(params.n, params.beta, rng))),
      degree_dist_(params.n - 1, params.edge_probability()) {}

void DynamicGraphEpidemic::infect(Vertex v) {
  state_.graph.infect(v);
  if (!state_.ever_infected[v]) {
    state_.ever_infected[v] = 1;
    ++state_.ever_infected_count;
  }
  peak_ = std::max<std::uint64_t>(peak_, state_.graph.infected_count());
}

void DynamicGraphEpidemic::seed(std::span<const Vertex> initial) {
  for (Vertex v : initial) {
    if (v >= params_.n) throw std::invalid_argument("initial vertex out of range");
    infect(v);
  }
}

double DynamicGraphEpidemic::total_rate() const {
  const auto& g = state_.graph;
  const double updates = mode_ == Mode::adaptive ? static_cast<double>(g.exposed_count())
                                                 : static_cast<double>(params_.n);
  return static_cast<double>(g.infected_count()) +
         params_.lambda * static_cast<double>(g.si_edges()) + params_.kappa * updates;
}

DynamicGraphEpidemic::Event DynamicGraphEpidemic::step(Rng& rng) {
  auto& g = state_.graph;
  const double recovery = static_cast<double>(g.infected_count());
  const double transmission = params_.lambda * static_cast<double>(g.si_edges());
  const double update =
      params_.kappa * (mode_ == Mode::adaptive ? static_cast<double>(g.exposed_count())
                                               : static_cast<double>(params_.n));
  const double total = recovery + transmission + update;
  if (!(total > 0.0)) return Event::none;

  state_.time += exponential(rng, total);
  ++events_;
  const double u = uniform01(rng) * total;
  if (u < recovery) {
    g.cure(g.sample_infected(rng));
    return Event::recovery;
  }
  if (u < recovery + transmission && g.si_edges() > 0) {
    infect(g.sample_transmission_target(rng));
    return Event::transmission;
  }
  if (update > 0.0) {
    const Vertex v = mode_ == Mode::adaptive
                         ? g.sample_exposed(rng)
                         : static_cast<Vertex>(uniform_index(rng, params_.n));
    reconnect(g, v, degree_dist_(rng), rng, scratch_);
    return Event::update;
  }
  // Rounding put u on the boundary of an empty category; fall back to recovery.
  g.cure(g.sample_infected(rng));
  return Event::recovery;
}

TrajectoryStats run_trajectory(const Params& params, Mode mode, std::span<const Vertex> initial,
                               const StopRule& stop, Rng& rng) {
  if (initial.empty()) throw std::invalid_argument("initial infected set must be nonempty");
  DynamicGraphEpidemic sim(params, mode, rng);
  sim.seed(initial);
  const std::uint64_t threshold = params.epidemic_size();

  TrajectoryStats stats;
  const auto& state = sim.state();
  for (;;) {
    if (state.graph.infected_count() == 0) {
      stats.termination = Termination::extinct;
      stats.extinction_time = state.time;
      break;
    }
    if (stop.stop_on_epidemic && state.ever_infected_count >= threshold) {
      stats.termination = Termination::epidemic;
      break;
    }
    if (sim.events() >= stop.event_budget) {
      stats.termination = Termination::budget_exceeded;
      break;
    }
    sim.step(rng);
  }
  stats.ever_infected_count = state.ever_infected_count;
  stats.peak_infected = sim.peak_infected();
  stats.events_processed = sim.events();
  stats.end_time = state.time;
  return stats;
}

}  // namespace acp
