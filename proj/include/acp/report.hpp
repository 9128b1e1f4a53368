#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "acp/theory.hpp"

namespace acp {

/// Empty string for an absent value, else %.17g.
std::string format_optional(const std::optional<double>& v);

inline constexpr const char* theory_csv_header =
    "lambda,beta,kappa,thm1a_small_lb,thm1a_large_kappa,thm1b,thm1b_simple,thm2_sub,thm2_super,"
    "mu,meta_lower_bound,branching_eig,meanfield_C,meanfield_eps,z_bound,infection_mean_bound,"
    "supercritical_radicand";

void theory_csv_row(std::ostream& os, const TheoryReport& r);
void theory_text(std::ostream& os, const TheoryReport& r);

/// Header plus one row per (lambda, kappa), lambda-major.
void write_theory_grid(std::ostream& os, double beta, const std::vector<double>& lambda_grid,
                       const std::vector<double>& kappa_grid);

}  // namespace acp
