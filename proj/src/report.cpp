#include "acp/report.hpp"

#include <iomanip>
#include <ostream>

#include "acp/sweep.hpp"

namespace acp {

std::string format_optional(const std::optional<double>& v) {
  return v ? format_double(*v) : std::string();
}

namespace {
const char* flag(bool b) { return b ? "true" : "false"; }
}  // namespace

void theory_csv_row(std::ostream& os, const TheoryReport& r) {
  os << format_double(r.lambda) << ',' << format_double(r.beta) << ',' << format_double(r.kappa)
     << ',' << flag(r.thm1a_small_lb) << ',' << flag(r.thm1a_large_kappa) << ',' << flag(r.thm1b)
     << ',' << flag(r.thm1b_simple) << ',' << flag(r.thm2_sub) << ',' << flag(r.thm2_super) << ','
     << format_double(r.mu) << ',' << format_optional(r.meta_lower_bound) << ','
     << format_double(r.branching_eig) << ',' << format_optional(r.meanfield_C) << ','
     << format_optional(r.meanfield_eps) << ',' << format_optional(r.z_bound) << ',' << format_optional(r.infection_mean_bound) << ','
     << format_double(supercritical_radicand(r.lambda, r.beta, r.kappa)) << '\n';
}

void theory_text(std::ostream& os, const TheoryReport& r) {
  auto line = [&](const char* key, const std::string& value) {
    os << std::left << std::setw(24) << key << value << '\n';
  };
  line("lambda", format_double(r.lambda));
  line("beta", format_double(r.beta));
  line("kappa", format_double(r.kappa));
  line("thm1a_small_lb", flag(r.thm1a_small_lb));
  line("thm1a_large_kappa", flag(r.thm1a_large_kappa));
  line("thm1b", flag(r.thm1b));
  line("thm1b_simple", flag(r.thm1b_simple));
  line("thm2_sub", flag(r.thm2_sub));
  line("thm2_super", flag(r.thm2_super));
  line("mu", format_double(r.mu));
  line("meta_lower_bound", r.meta_lower_bound ? format_optional(r.meta_lower_bound) : "n/a");
  line("branching_eig", format_double(r.branching_eig));
  line("meanfield_C", r.meanfield_C ? format_optional(r.meanfield_C) : "n/a");
  line("meanfield_eps", r.meanfield_eps ? format_optional(r.meanfield_eps) : "n/a");
  line("z_bound", r.z_bound ? format_optional(r.z_bound) : "n/a");
  line("infection_mean_bound", r.infection_mean_bound ? format_optional(r.infection_mean_bound) : "n/a");
  line("subcritical_constant", format_double(subcritical_constant()));
  if (r.radicand_guard) os << "note: negative radicand, supercritical test reduced to mu > 0\n";
}

void write_theory_grid(std::ostream& os, double beta, const std::vector<double>& lambda_grid,
                       const std::vector<double>& kappa_grid) {
  os << theory_csv_header << '\n';
  for (double l : lambda_grid)
    for (double k : kappa_grid) theory_csv_row(os, evaluate_conditions(l, beta, k));
}

}  // namespace acp
