#include "acp/cpef.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <stdexcept>

#include "acp/contact_graph.hpp"

namespace acp {

namespace {

// Mirrors the expanded part of a HostTree as a ContactGraph, one vertex per node.
class HostInfection {
 public:
  HostInfection(HostTree& tree, Rng& rng) : tree_(tree), rng_(rng), graph_(tree.size()) {
    deleted_.assign(tree.size(), 0);
    ever_.assign(tree.size(), 0);
    for (Node v = 0; v < tree.size(); ++v) link_children(v);
  }

  // False if the tree could not be expanded under its node cap.
  bool infect(Node v) {
    if (!tree_.expanded(v)) {
      if (!tree_.expand(v, rng_)) return false;
      sync_size();
      link_children(v);
    }
    graph_.infect(v);
    if (!ever_[v]) {
      ever_[v] = 1;
      ++ever_count_;
    }
    return true;
  }

  void remove(Node v) {
    graph_.isolate(v);
    graph_.cure(v);
    deleted_[v] = 1;
  }

  ContactGraph& graph() { return graph_; }
  std::uint64_t ever_count() const { return ever_count_; }

 private:
  void sync_size() {
    while (graph_.size() < tree_.size()) graph_.add_vertex();
    deleted_.resize(tree_.size(), 0);
    ever_.resize(tree_.size(), 0);
  }

  void link_children(Node v) {
    if (!tree_.expanded(v) || deleted_[v]) return;
    const Node first = tree_.first_child(v);
    for (Node c = first; c < first + tree_.child_count(v); ++c)
      if (!deleted_[c] && graph_.degree(c) == 0) graph_.add_edge(v, c);
  }

  HostTree& tree_;
  Rng& rng_;
  ContactGraph graph_;
  std::vector<std::uint8_t> deleted_;
  std::vector<std::uint8_t> ever_;
  std::uint64_t ever_count_ = 0;
};

}  // namespace

HostOutcome run_host_infection(HostTree& tree, double lambda, double kappa, Rng& rng,
                               const HostLimits& limits) {
  if (!(lambda >= 0.0) || !(kappa >= 0.0))
    throw std::invalid_argument("lambda and kappa must be non-negative");
  HostOutcome out;
  HostInfection host(tree, rng);
  auto& g = host.graph();
  if (!host.infect(0)) {
    out.capped = true;
    return out;
  }
  std::uint64_t events = 0;
  double time = 0.0;
  while (g.infected_count() > 0) {
    if (host.ever_count() > limits.max_ever_infected || events >= limits.max_events) {
      out.capped = true;
      break;
    }
    const double recovery = static_cast<double>(g.infected_count());
    const double transmission = lambda * static_cast<double>(g.si_edges());
    const double update = kappa * static_cast<double>(g.exposed_count());
    const double total = recovery + transmission + update;
    time += exponential(rng, total);
    ++events;
    const double u = uniform01(rng) * total;
    if (u < recovery || (transmission == 0.0 && update == 0.0)) {
      g.cure(g.sample_infected(rng));
    } else if ((u < recovery + transmission || update == 0.0) && g.si_edges() > 0) {
      if (!host.infect(g.sample_transmission_target(rng))) {
        out.capped = true;
        break;
      }
    } else {
      const Vertex v = g.sample_exposed(rng);
      if (g.infected(v)) ++out.meta_offspring;
      host.remove(v);
    }
  }
  out.ever_infected = host.ever_count();
  out.duration = time;
  return out;
}

CpefOutcome run_cpef(const CpefParams& params, const CpefBudgets& budgets, Rng& rng) {
  if (budgets.total_infected == 0 || budgets.meta_nodes == 0 || budgets.node_cap == 0)
    throw std::invalid_argument("budgets must be positive");
  CpefOutcome out;
  // Pending hosts per meta depth; hosts are iid so only the counts matter.
  std::deque<std::uint64_t> pending{1};
  std::uint32_t depth = 0;
  std::uint64_t queued = 1;
  while (!pending.empty()) {
    if (pending.front() == 0) {
      pending.pop_front();
      ++depth;
      continue;
    }
    --pending.front();
    out.max_meta_depth = depth;
    ++out.trees_infected;
    HostTree tree(params.beta, budgets.node_cap);
    HostLimits limits;
    limits.max_ever_infected = budgets.total_infected - out.total_ever_infected;
    const HostOutcome host = run_host_infection(tree, params.lambda, params.kappa, rng, limits);
    out.total_ever_infected += host.ever_infected;
    if (host.capped || out.total_ever_infected >= budgets.total_infected) {
      out.termination = Termination::budget_exceeded;
      return out;
    }
    if (host.meta_offspring > 0) {
      queued += host.meta_offspring;
      if (queued > budgets.meta_nodes) {
        out.termination = Termination::budget_exceeded;
        return out;
      }
      if (pending.size() < 2) pending.push_back(0);
      pending[1] += host.meta_offspring;
    }
  }
  out.termination = Termination::extinct;
  return out;
}

MetaOffspringEstimate estimate_meta_offspring(const CpefParams& params, std::uint64_t samples,
                                              Rng& rng, std::size_t node_cap) {
  if (samples < 2) throw std::invalid_argument("need at least two samples");
  MetaOffspringEstimate est;
  est.samples = samples;
  double sum = 0.0;
  double sum_sq = 0.0;
  for (std::uint64_t i = 0; i < samples; ++i) {
    HostTree tree(params.beta, node_cap);
    const HostOutcome host = run_host_infection(tree, params.lambda, params.kappa, rng);
    if (host.capped) ++est.capped_hosts;
    const auto x = static_cast<double>(host.meta_offspring);
    sum += x;
    sum_sq += x * x;
  }
  const auto n = static_cast<double>(samples);
  est.mean = sum / n;
  const double var = std::max(0.0, (sum_sq - n * est.mean * est.mean) / (n - 1.0));
  est.std_error = std::sqrt(var / n);
  return est;
}

}  // namespace acp
