#pragma once

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "acp/cpef.hpp"
#include "acp/simulator.hpp"

namespace acp {

enum class SweepModel { adaptive, nonadaptive, cpef };

std::string_view to_string(SweepModel m);
SweepModel parse_sweep_model(std::string_view text);

struct SweepConfig {
  SweepModel model = SweepModel::adaptive;
  double beta = 3.0;
  std::vector<double> lambda_grid;
  std::vector<double> kappa_grid;
  std::uint32_t n = 2000;
  double epsilon = 0.05;
  std::uint64_t samples = 100;
  double z_super = 2.0;
  std::uint64_t event_budget = 100'000'000;
  std::uint64_t cpef_total_infected = 100'000;
  std::uint64_t cpef_meta_nodes = 100'000;
  std::uint64_t cpef_node_cap = 1'000'000;
  std::uint64_t seed = 1;
  std::string out;
  unsigned threads = 0;  // 0: one per hardware thread

  /// Throws ConfigError on any violated invariant.
  void validate() const;
  bool operator==(const SweepConfig&) const = default;
};

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// "a:b:step" (inclusive of b up to rounding) or "x1,x2,...".
std::vector<double> parse_grid(std::string_view text);

/// key=value lines; '#' starts a comment. `origin` names the source in errors.
SweepConfig parse_config(std::string_view text, std::string_view origin = "config");
SweepConfig load_config(const std::string& path);
/// Every key, grids as comma lists, floats with 17 significant digits.
std::string emit_config(const SweepConfig& config);

/// Applies one key=value pair; shared by the file parser and CLI overrides.
void set_config_value(SweepConfig& config, std::string_view key, std::string_view value);

enum class Classification { supercritical_evidence, subcritical_evidence, undetermined };
std::string_view to_string(Classification c);

/// Minimum sample count for a zero-epidemic cell to count as subcritical evidence.
inline constexpr std::uint64_t min_subcritical_samples = 100;

Classification classify_cell(std::uint64_t epidemics, std::uint64_t samples, double z_super);

struct CellResult {
  double lambda = 0.0;
  double kappa = 0.0;
  std::uint64_t samples = 0;
  std::uint64_t epidemics = 0;
  double p_hat = 0.0;
  double std_error = 0.0;
  Classification classification = Classification::undetermined;
  double mean_ever_infected = 0.0;
  std::uint64_t budget_hits = 0;
};

/// One trajectory of the configured model for grid cell (lambda, kappa).
struct ReplicaOutcome {
  bool epidemic = false;
  bool budget_hit = false;
  std::uint64_t ever_infected = 0;
};
ReplicaOutcome run_replica(const SweepConfig& config, double lambda, double kappa, Rng& rng);

/// Cells ordered lambda-major. Replicas run on `config.threads` workers; the
/// result does not depend on the thread count or scheduling.
std::vector<CellResult> run_sweep(const SweepConfig& config);

inline constexpr std::string_view sweep_csv_header =
    "model,beta,n,epsilon,lambda,kappa,samples,epidemics,p_hat,stderr,classification,"
    "mean_ever_infected,budget_hits,seed";

void write_csv(std::ostream& os, const SweepConfig& config, const std::vector<CellResult>& cells);
/// Throws ConfigError if the file cannot be written.
void write_csv_file(const std::string& path, const SweepConfig& config,
                    const std::vector<CellResult>& cells);

/// %.17g
std::string format_double(double x);

}  // namespace acp
