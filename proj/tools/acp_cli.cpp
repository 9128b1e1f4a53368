// acp: command-line front end for the simulators, sweeps and closed forms.

#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "acp/cpef.hpp"
#include "acp/exploration.hpp"
#include "acp/qsd.hpp"
#include "acp/report.hpp"
#include "acp/simulator.hpp"
#include "acp/sweep.hpp"
#include "acp/theory.hpp"

using namespace acp;

namespace {

std::string opt(const std::optional<double>& v) { return v ? format_double(*v) : std::string(); }

// Opens `path` for writing, or returns std::cout when it is empty. Done before
// any simulation so a bad path fails fast.
struct Output {
  std::ofstream file;
  std::ostream* os = &std::cout;
  explicit Output(const std::string& path) {
    if (path.empty()) return;
    file.open(path, std::ios::binary);
    if (!file) throw ConfigError("cannot write '" + path + "'");
    os = &file;
  }
};

int run_simulate(const std::string& model, const Params& p, std::uint64_t seed,
                 std::uint64_t budget, bool until_extinct) {
  Rng rng = make_rng(seed);
  StopRule stop;
  stop.event_budget = budget;
  stop.stop_on_epidemic = !until_extinct;
  TrajectoryStats s;
  if (model == "exploration") {
    s = run_exploration_trajectory(p, stop, rng);
  } else {
    const Vertex initial[] = {0};
    s = run_trajectory(p, parse_mode(model), initial, stop, rng);
  }
  std::cout << "ever_infected_count,extinction_time,peak_infected,termination,events_processed,"
               "end_time\n"
            << s.ever_infected_count << ',' << opt(s.extinction_time) << ',' << s.peak_infected
            << ',' << to_string(s.termination) << ',' << s.events_processed << ','
            << format_double(s.end_time) << '\n';
  return 0;
}

int run_cpef_cmd(const CpefParams& params, const CpefBudgets& budgets, std::uint64_t runs,
                 std::uint64_t meta_samples, std::uint64_t seed, const std::string& out_path) {
  Output out(out_path);
  auto& os = *out.os;
  os << "run,total_ever_infected,trees_infected,termination,max_meta_depth\n";
  for (std::uint64_t r = 0; r < runs; ++r) {
    Rng rng = make_rng(derive_seed(seed, 0, r));
    const CpefOutcome o = run_cpef(params, budgets, rng);
    os << r << ',' << o.total_ever_infected << ',' << o.trees_infected << ','
       << to_string(o.termination) << ',' << o.max_meta_depth << '\n';
  }
  if (meta_samples >= 2) {
    Rng rng = make_rng(derive_seed(seed, 1));
    const auto est = estimate_meta_offspring(params, meta_samples, rng, budgets.node_cap);
    std::ostringstream bound;
    try {
      bound << format_double(meta_offspring_lower_bound(params.lambda, params.beta, params.kappa));
    } catch (const DomainError&) {
    }
    std::cerr << "meta_offspring_mean=" << format_double(est.mean)
              << " stderr=" << format_double(est.std_error) << " capped_hosts=" << est.capped_hosts
              << " lower_bound=" << (bound.str().empty() ? "n/a" : bound.str()) << '\n';
  }
  return 0;
}

int run_qsd_cmd(double beta_star, double kappa, double lambda, std::uint32_t L, double tol,
                const std::string& out_path) {
  if (L == 0) L = default_truncation(beta_star);
  const StarGenerator gen = star_generator(beta_star, kappa, lambda, L);
  QsdResult res;
  try {
    res = quasi_stationary(gen, tol);
  } catch (const QsdNotConverged& e) {
    std::cerr << e.what() << '\n';
    return 2;
  }
  Output out(out_path);
  auto& os = *out.os;
  const QsdMoments m = qsd_moments(res, beta_star);
  os << "section,key,value\n";
  os << "summary,rho," << format_double(res.rho) << '\n'
     << "summary,iterations," << res.iterations << '\n'
     << "summary,residual," << format_double(res.residual) << '\n'
     << "summary,mean," << format_double(m.mean) << '\n'
     << "summary,second_moment," << format_double(m.second_moment) << '\n'
     << "summary,mean_bound," << (m.mean_bound ? "true" : "false") << '\n'
     << "summary,second_moment_bound," << (m.second_bound ? "true" : "false") << '\n';
  for (std::uint32_t d = 0; d <= L; ++d) os << "alpha," << d << ',' << format_double(res.alpha[d]) << '\n';
  for (std::uint32_t x = 1; x <= L; ++x) {
    const FlowCheck fc = flow_inequality_check(gen, res, x);
    os << "flow_margin," << x << ',' << format_double(fc.margin) << '\n';
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Contact process on adaptive dynamic random graphs"};
  app.require_subcommand(1);

  // simulate
  auto* sim = app.add_subcommand("simulate", "Run one trajectory and print its statistics");
  std::string sim_model = "adaptive";
  Params sim_params;
  std::uint64_t sim_seed = 1;
  std::uint64_t sim_budget = StopRule{}.event_budget;
  bool sim_until_extinct = false;
  sim->add_option("--model", sim_model, "adaptive, nonadaptive or exploration")
      ->check(CLI::IsMember({"adaptive", "nonadaptive", "exploration"}));
  sim->add_option("--n", sim_params.n, "Vertex count");
  sim->add_option("--beta", sim_params.beta, "Mean degree");
  sim->add_option("--lambda", sim_params.lambda, "Transmission rate per edge");
  sim->add_option("--kappa", sim_params.kappa, "Update rate");
  sim->add_option("--epsilon", sim_params.epsilon, "Epidemic fraction");
  sim->add_option("--seed", sim_seed, "Random seed");
  sim->add_option("--budget", sim_budget, "Event budget");
  sim->add_flag("--until-extinct", sim_until_extinct, "Ignore the epidemic stop rule");

  // sweep
  auto* sweep = app.add_subcommand("sweep", "Monte Carlo sweep over a (lambda, kappa) grid");
  std::string config_path;
  std::string out_path;
  std::map<std::string, std::string> overrides;
  auto add_override = [&](CLI::App* cmd, const std::string& flag_name, const std::string& key,
                          const std::string& help) {
    cmd->add_option_function<std::string>(
        flag_name, [&overrides, key](const std::string& v) { overrides[key] = v; }, help);
  };
  sweep->add_option("--config", config_path, "key=value config file");
  sweep->add_option("--out", out_path, "CSV output path (stdout if omitted)");
  add_override(sweep, "--seed", "seed", "Master seed");
  add_override(sweep, "--model", "model", "adaptive, nonadaptive or cpef");
  add_override(sweep, "--beta", "beta", "Mean degree");
  add_override(sweep, "--lambda-grid", "lambda_grid", "a:b:step or comma list");
  add_override(sweep, "--kappa-grid", "kappa_grid", "a:b:step or comma list");
  add_override(sweep, "--n", "n", "Vertex count");
  add_override(sweep, "--epsilon", "epsilon", "Epidemic fraction");
  add_override(sweep, "--samples", "samples", "Trajectories per cell");
  add_override(sweep, "--z-super", "z_super", "Standard errors required for supercritical evidence");
  add_override(sweep, "--threads", "threads", "Worker threads (0 = all cores)");
  add_override(sweep, "--event-budget", "event_budget", "Event budget per trajectory");
  bool print_config = false;
  sweep->add_flag("--print-config", print_config, "Print the resolved config and exit");

  // cpef
  auto* cpef = app.add_subcommand("cpef", "Run the evolving-forest model");
  CpefParams cpef_params;
  CpefBudgets cpef_budgets{100'000, 100'000, 1'000'000};
  std::uint64_t cpef_runs = 100;
  std::uint64_t cpef_meta_samples = 0;
  std::uint64_t cpef_seed = 1;
  std::string cpef_out;
  cpef->add_option("--lambda", cpef_params.lambda, "Transmission rate");
  cpef->add_option("--kappa", cpef_params.kappa, "Update rate");
  cpef->add_option("--beta", cpef_params.beta, "Mean offspring of host trees");
  cpef->add_option("--runs", cpef_runs, "Independent forest runs");
  cpef->add_option("--total-cap", cpef_budgets.total_infected, "Total infected budget");
  cpef->add_option("--meta-cap", cpef_budgets.meta_nodes, "Meta-tree node budget");
  cpef->add_option("--node-cap", cpef_budgets.node_cap, "Per-host node cap");
  cpef->add_option("--meta-samples", cpef_meta_samples, "Hosts for the meta-offspring estimate");
  cpef->add_option("--seed", cpef_seed, "Random seed");
  cpef->add_option("--out", cpef_out, "CSV output path (stdout if omitted)");

  // qsd
  auto* qsd = app.add_subcommand("qsd", "Quasi-stationary analysis of the dynamic star");
  double q_beta_star = 2.0;
  double q_kappa = 10.0;
  double q_lambda = 0.5;
  std::uint32_t q_L = 0;
  double q_tol = 1e-12;
  std::string q_out;
  qsd->add_option("--beta-star", q_beta_star, "Resampling mean");
  qsd->add_option("--kappa", q_kappa, "Update rate");
  qsd->add_option("--lambda", q_lambda, "Absorption rate per edge");
  qsd->add_option("--L", q_L, "Truncation level (default 10*beta_star + 20)");
  qsd->add_option("--tol", q_tol, "Residual tolerance");
  qsd->add_option("--out", q_out, "CSV output path (stdout if omitted)");

  // theory
  auto* theory = app.add_subcommand("theory", "Evaluate the closed-form conditions");
  double t_lambda = 1.0;
  double t_beta = 3.0;
  double t_kappa = 1.0;
  std::string t_lambda_grid;
  std::string t_kappa_grid;
  std::string t_out;
  bool t_csv = false;
  theory->add_option("--lambda", t_lambda, "Transmission rate");
  theory->add_option("--beta", t_beta, "Mean degree");
  theory->add_option("--kappa", t_kappa, "Update rate");
  theory->add_option("--lambda-grid", t_lambda_grid, "Grid mode: a:b:step or comma list");
  theory->add_option("--kappa-grid", t_kappa_grid, "Grid mode: a:b:step or comma list");
  theory->add_flag("--csv", t_csv, "CSV instead of aligned text");
  theory->add_option("--out", t_out, "Output path (stdout if omitted)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*sim) {
      sim_params.validate();
      return run_simulate(sim_model, sim_params, sim_seed, sim_budget, sim_until_extinct);
    }
    if (*sweep) {
      SweepConfig cfg = config_path.empty() ? SweepConfig{} : load_config(config_path);
      for (const auto& [key, value] : overrides) {
        try {
          set_config_value(cfg, key, value);
        } catch (const ConfigError& e) {
          throw ConfigError("--" + key + ": " + e.what());
        }
      }
      if (!out_path.empty()) cfg.out = out_path;
      cfg.validate();
      if (print_config) {
        std::cout << emit_config(cfg);
        return 0;
      }
      Output out(cfg.out);
      const auto cells = run_sweep(cfg);
      write_csv(*out.os, cfg, cells);
      return 0;
    }
    if (*cpef) return run_cpef_cmd(cpef_params, cpef_budgets, cpef_runs, cpef_meta_samples, cpef_seed, cpef_out);
    if (*qsd) return run_qsd_cmd(q_beta_star, q_kappa, q_lambda, q_L, q_tol, q_out);
    if (*theory) {
      Output out(t_out);
      auto& os = *out.os;
      if (!t_lambda_grid.empty() || !t_kappa_grid.empty()) {
        const auto lg = t_lambda_grid.empty() ? std::vector<double>{t_lambda} : parse_grid(t_lambda_grid);
        const auto kg = t_kappa_grid.empty() ? std::vector<double>{t_kappa} : parse_grid(t_kappa_grid);
        write_theory_grid(os, t_beta, lg, kg);
        return 0;
      }
      const TheoryReport r = evaluate_conditions(t_lambda, t_beta, t_kappa);
      if (t_csv) {
        os << theory_csv_header << '\n';
        theory_csv_row(os, r);
      } else {
        theory_text(os, r);
      }
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
