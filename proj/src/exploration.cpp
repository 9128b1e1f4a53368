#include "acp/exploration.hpp"

#include <algorithm>
#include <random>
#include <stdexcept>

namespace acp {

ExplorationEpidemic::ExplorationEpidemic(const Params& params, Rng& rng) : params_(params) {
  params_.validate();
  const Vertex root = local(0);
  claim(root);
  infect(root, rng);
}

Vertex ExplorationEpidemic::local(std::uint32_t global) {
  auto [it, inserted] = local_of_.try_emplace(global, static_cast<Vertex>(graph_.size()));
  if (inserted) {
    graph_.add_vertex();
    global_of_.push_back(global);
    revealed_flag_.push_back(0);
    ever_flag_.push_back(0);
    claimed_flag_.push_back(0);
  }
  return it->second;
}

bool ExplorationEpidemic::is_revealed_global(std::uint32_t global) const {
  auto it = local_of_.find(global);
  return it != local_of_.end() && revealed_flag_[it->second];
}

void ExplorationEpidemic::claim(Vertex v) {
  if (!claimed_flag_[v]) {
    claimed_flag_[v] = 1;
    ++claimed_count_;
  }
}

void ExplorationEpidemic::connect(Vertex a, Vertex b) {
  graph_.add_edge(a, b);
  if (graph_.infected(a)) claim(b);
  if (graph_.infected(b)) claim(a);
}

void ExplorationEpidemic::reveal(Vertex v, Rng& rng) {
  revealed_flag_[v] = 1;
  revealed_.insert(v);
  // Half-edges to each still-unrevealed vertex, independently with probability beta/n.
  const std::uint64_t unrevealed = params_.n - revealed_.size();
  std::binomial_distribution<std::uint64_t> out_degree(unrevealed, params_.edge_probability());
  const std::uint64_t k = out_degree(rng);
  scratch_.clear();
  if (k == 0) return;
  if (k * 4 > unrevealed) {
    std::vector<std::uint32_t> pool;
    pool.reserve(unrevealed);
    for (std::uint32_t g = 0; g < params_.n; ++g)
      if (!is_revealed_global(g)) pool.push_back(g);
    std::sample(pool.begin(), pool.end(), std::back_inserter(scratch_), static_cast<std::ptrdiff_t>(k), rng);
  } else {
    while (scratch_.size() < k) {
      auto g = static_cast<std::uint32_t>(uniform_index(rng, params_.n));
      if (is_revealed_global(g)) continue;
      if (std::find(scratch_.begin(), scratch_.end(), g) != scratch_.end()) continue;
      scratch_.push_back(g);
    }
  }
  for (std::uint32_t g : scratch_) connect(v, local(g));
}

void ExplorationEpidemic::infect(Vertex v, Rng& rng) {
  graph_.infect(v);
  if (!ever_flag_[v]) {
    ever_flag_[v] = 1;
    ++ever_count_;
  }
  if (!revealed_flag_[v]) reveal(v, rng);
  for (Vertex w : graph_.neighbors(v)) claim(w);
  peak_ = std::max<std::uint64_t>(peak_, graph_.infected_count());
}

void ExplorationEpidemic::update_infected(Vertex v, Rng& rng) {
  // Fresh in- and out-connections to every other vertex, revealed or not.
  graph_.isolate(v);
  std::binomial_distribution<std::uint64_t> degree(params_.n - 1, params_.edge_probability());
  std::vector<Vertex> partners;
  sample_distinct_partners(params_.n, global_of_[v], degree(rng), rng, partners);
  for (Vertex g : partners) connect(v, local(g));
}

void ExplorationEpidemic::update_healthy(Vertex v, Rng& rng) {
  graph_.isolate(v);
  if (revealed_flag_[v]) {
    revealed_flag_[v] = 0;
    revealed_.erase(v);
  }
  // Only the half-edges from revealed vertices are generated; edges to
  // unrevealed vertices stay unobserved.
  const std::size_t r = revealed_.size();
  std::binomial_distribution<std::uint64_t> in_degree(r, params_.edge_probability());
  const std::uint64_t k = in_degree(rng);
  if (k == 0) return;
  scratch_.clear();
  if (k * 4 > r) {
    std::sample(revealed_.items().begin(), revealed_.items().end(), std::back_inserter(scratch_),
                static_cast<std::ptrdiff_t>(k), rng);
  } else {
    while (scratch_.size() < k) {
      const Vertex w = revealed_.sample(rng);
      if (std::find(scratch_.begin(), scratch_.end(), w) == scratch_.end()) scratch_.push_back(w);
    }
  }
  for (Vertex w : scratch_) connect(v, w);
}

ExplorationEpidemic::Event ExplorationEpidemic::step(Rng& rng) {
  const double recovery = static_cast<double>(graph_.infected_count());
  const double transmission = params_.lambda * static_cast<double>(graph_.si_edges());
  const double update = params_.kappa * static_cast<double>(graph_.exposed_count());
  const double total = recovery + transmission + update;
  if (!(total > 0.0)) return Event::none;

  time_ += exponential(rng, total);
  ++events_;
  const double u = uniform01(rng) * total;
  if (u < recovery || (transmission == 0.0 && update == 0.0)) {
    graph_.cure(graph_.sample_infected(rng));
    return Event::recovery;
  }
  if ((u < recovery + transmission || update == 0.0) && graph_.si_edges() > 0) {
    infect(graph_.sample_transmission_target(rng), rng);
    return Event::transmission;
  }
  const Vertex v = graph_.sample_exposed(rng);
  if (graph_.infected(v)) {
    update_infected(v, rng);
  } else {
    update_healthy(v, rng);
  }
  return Event::update;
}

bool ExplorationEpidemic::consistent() const {
  if (!graph_.consistent()) return false;
  std::uint64_t ever = 0;
  std::uint64_t claimed = 0;
  std::size_t revealed = 0;
  for (Vertex v = 0; v < graph_.size(); ++v) {
    if (ever_flag_[v]) ++ever;
    if (claimed_flag_[v]) ++claimed;
    if (revealed_flag_[v]) {
      ++revealed;
      if (!ever_flag_[v] || !claimed_flag_[v] || !revealed_.contains(v)) return false;
    } else {
      if (graph_.infected(v) || revealed_.contains(v)) return false;
      for (Vertex w : graph_.neighbors(v))
        if (!revealed_flag_[w]) return false;
    }
  }
  return ever == ever_count_ && claimed == claimed_count_ && revealed == revealed_.size();
}

TrajectoryStats run_exploration_trajectory(const Params& params, const StopRule& stop, Rng& rng) {
  ExplorationEpidemic sim(params, rng);
  const std::uint64_t threshold = params.epidemic_size();
  TrajectoryStats stats;
  for (;;) {
    if (sim.infected_count() == 0) {
      stats.termination = Termination::extinct;
      stats.extinction_time = sim.time();
      break;
    }
    if (stop.stop_on_epidemic && sim.ever_infected_count() >= threshold) {
      stats.termination = Termination::epidemic;
      break;
    }
    if (sim.events() >= stop.event_budget) {
      stats.termination = Termination::budget_exceeded;
      break;
    }
    sim.step(rng);
  }
  stats.ever_infected_count = sim.ever_infected_count();
  stats.peak_infected = sim.peak_infected();
  stats.events_processed = sim.events();
  stats.end_time = sim.time();
  return stats;
}

}  // namespace acp
