#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <ostream>
#include <thread>

#include "acp/sweep.hpp"

namespace acp {

std::string_view to_string(Classification c) {
  switch (c) {
    case Classification::supercritical_evidence: return "supercritical_evidence";
    case Classification::subcritical_evidence: return "subcritical_evidence";
    case Classification::undetermined: return "undetermined";
  }
  return "?";
}

Classification classify_cell(std::uint64_t epidemics, std::uint64_t samples, double z_super) {
  if (epidemics > samples) throw std::invalid_argument("more epidemics than samples");
  if (samples == 0) return Classification::undetermined;
  const double p = static_cast<double>(epidemics) / static_cast<double>(samples);
  const double se = std::sqrt(p * (1.0 - p) / static_cast<double>(samples));
  if (p - z_super * se > 0.0) return Classification::supercritical_evidence;
  if (epidemics == 0 && samples >= min_subcritical_samples) return Classification::subcritical_evidence;
  return Classification::undetermined;
}

ReplicaOutcome run_replica(const SweepConfig& config, double lambda, double kappa, Rng& rng) {
  ReplicaOutcome out;
  if (config.model == SweepModel::cpef) {
    CpefParams params{lambda, kappa, config.beta};
    CpefBudgets budgets{config.cpef_total_infected, config.cpef_meta_nodes, config.cpef_node_cap};
    const CpefOutcome r = run_cpef(params, budgets, rng);
    out.budget_hit = r.termination == Termination::budget_exceeded;
    out.epidemic = out.budget_hit;
    out.ever_infected = r.total_ever_infected;
    return out;
  }
  Params params;
  params.n = config.n;
  params.beta = config.beta;
  params.lambda = lambda;
  params.kappa = kappa;
  params.epsilon = config.epsilon;
  StopRule stop;
  stop.event_budget = config.event_budget;
  const Vertex initial[] = {0};
  const Mode mode = config.model == SweepModel::adaptive ? Mode::adaptive : Mode::nonadaptive;
  const TrajectoryStats s = run_trajectory(params, mode, initial, stop, rng);
  out.epidemic = s.termination == Termination::epidemic;
  out.budget_hit = s.termination == Termination::budget_exceeded;
  out.ever_infected = s.ever_infected_count;
  return out;
}

namespace {

constexpr std::uint64_t chunk_size = 32;

struct ChunkTotals {
  std::uint64_t epidemics = 0;
  std::uint64_t budget_hits = 0;
  std::uint64_t ever_infected = 0;
};

}  // namespace

std::vector<CellResult> run_sweep(const SweepConfig& config) {
  config.validate();
  const std::size_t cells = config.lambda_grid.size() * config.kappa_grid.size();
  const std::uint64_t chunks_per_cell = (config.samples + chunk_size - 1) / chunk_size;
  const std::uint64_t tasks = cells * chunks_per_cell;
  std::vector<ChunkTotals> totals(tasks);

  // Replica r of cell c always uses stream derive_seed(seed, c, r), so the
  // integer totals are the same under any split of the work.
  std::atomic<std::uint64_t> next{0};
  auto worker = [&] {
    for (std::uint64_t task; (task = next.fetch_add(1)) < tasks;) {
      const std::uint64_t cell = task / chunks_per_cell;
      const std::uint64_t first = (task % chunks_per_cell) * chunk_size;
      const std::uint64_t last = std::min(config.samples, first + chunk_size);
      const double lambda = config.lambda_grid[cell / config.kappa_grid.size()];
      const double kappa = config.kappa_grid[cell % config.kappa_grid.size()];
      ChunkTotals& t = totals[task];
      for (std::uint64_t r = first; r < last; ++r) {
        Rng rng = make_rng(derive_seed(config.seed, cell, r));
        const ReplicaOutcome o = run_replica(config, lambda, kappa, rng);
        t.epidemics += o.epidemic;
        t.budget_hits += o.budget_hit;
        t.ever_infected += o.ever_infected;
      }
    }
  };
  unsigned threads = config.threads ? config.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::uint64_t>(threads, tasks));
  std::vector<std::thread> pool;
  for (unsigned i = 1; i < threads; ++i) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();

  std::vector<CellResult> results(cells);
  for (std::size_t cell = 0; cell < cells; ++cell) {
    ChunkTotals sum;
    for (std::uint64_t k = 0; k < chunks_per_cell; ++k) {
      const auto& t = totals[cell * chunks_per_cell + k];
      sum.epidemics += t.epidemics;
      sum.budget_hits += t.budget_hits;
      sum.ever_infected += t.ever_infected;
    }
    CellResult& r = results[cell];
    r.lambda = config.lambda_grid[cell / config.kappa_grid.size()];
    r.kappa = config.kappa_grid[cell % config.kappa_grid.size()];
    r.samples = config.samples;
    r.epidemics = sum.epidemics;
    const auto n = static_cast<double>(r.samples);
    r.p_hat = static_cast<double>(r.epidemics) / n;
    r.std_error = std::sqrt(r.p_hat * (1.0 - r.p_hat) / n);
    r.classification = classify_cell(r.epidemics, r.samples, config.z_super);
    r.mean_ever_infected = static_cast<double>(sum.ever_infected) / n;
    r.budget_hits = sum.budget_hits;
  }
  return results;
}

void write_csv(std::ostream& os, const SweepConfig& config, const std::vector<CellResult>& cells) {
  os << sweep_csv_header << '\n';
  const bool finite = config.model != SweepModel::cpef;
  for (const CellResult& r : cells) {
    // The forest model has no population size; n and epsilon are left empty.
    os << to_string(config.model) << ',' << format_double(config.beta) << ','
       << (finite ? std::to_string(config.n) : std::string()) << ','
       << (finite ? format_double(config.epsilon) : std::string()) << ','
       << format_double(r.lambda) << ',' << format_double(r.kappa) << ',' << r.samples << ','
       << r.epidemics << ',' << format_double(r.p_hat) << ',' << format_double(r.std_error) << ','
       << to_string(r.classification) << ',' << format_double(r.mean_ever_infected) << ','
       << r.budget_hits << ',' << config.seed << '\n';
  }
}

void write_csv_file(const std::string& path, const SweepConfig& config,
                    const std::vector<CellResult>& cells) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write '" + path + "'");
  write_csv(out, config, cells);
  if (!out) throw ConfigError("write to '" + path + "' failed");
}

}  // namespace acp
