#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "acp/rng.hpp"

namespace acp {

class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Mean offspring of the pruned SIR tree, beta*lambda / (1 + 2 kappa + lambda).
double sir_offspring_mean(double lambda, double beta, double kappa);

/// Lower bound on the mean number of infected updates per host tree.
/// Throws DomainError when the pruned SIR mean is >= 1.
double meta_offspring_lower_bound(double lambda, double beta, double kappa);

/// Top eigenvalue of the active/dormant mean matrix, with b = lambda*beta*(1-delta)
/// and k = kappa*(1-eps).
double branching_top_eigenvalue(double lambda, double beta, double kappa, double delta, double eps);
double branching_top_eigenvalue_bk(double b, double k);

struct MeanfieldDecay {
  double C = 0.0;
  double eps_decay = 0.0;
  bool defined = false;  // false when lambda*beta == 0
};
MeanfieldDecay meanfield_decay(double lambda, double beta, double kappa);

/// Upper bound on the mean subtree partition function of a Pois(beta) tree.
/// Throws DomainError unless lambda*beta*e < 1.
double z_bound(double lambda, double beta);

/// min over k >= 2 of rho^k / (k - 1). Throws DomainError for rho <= 1.
double slow_factor_theta(double rho);
/// The minimizing k (smallest one on ties).
std::uint32_t slow_factor_argmin(double rho);

/// Bound on the mean ever-infected count on the root host tree, as a function
/// of x = lambda*beta. Throws DomainError for x*e > 3/4.
double infection_mean_bound(double lambda_beta);

/// Smaller root of a X^2 - b X + 9.
double subcritical_constant();
/// The same constant from its closed form.
double subcritical_constant_closed_form();
/// a X^2 - b X + 9.
double subcritical_quadratic(double x);

/// Right-hand side of the tree supercriticality condition, under the square root.
double supercritical_radicand(double lambda, double beta, double kappa);

struct TheoryReport {
  double lambda = 0.0;
  double beta = 0.0;
  double kappa = 0.0;

  bool thm1a_small_lb = false;
  bool thm1a_large_kappa = false;
  bool thm1b = false;
  bool thm1b_simple = false;
  bool thm2_sub = false;
  bool thm2_super = false;
  bool radicand_guard = false;  // radicand came out negative

  double mu = 0.0;
  std::optional<double> meta_lower_bound;
  double branching_eig = 0.0;
  std::optional<double> meanfield_C;
  std::optional<double> meanfield_eps;
  std::optional<double> z_bound;
  std::optional<double> infection_mean_bound;
};

TheoryReport evaluate_conditions(double lambda, double beta, double kappa);

// Auxiliary simulators.

enum class BranchingEnd { extinct, alive_at_t_max, population_cap };

struct BranchingPoint {
  double t;
  std::uint64_t active;
  std::uint64_t dormant;
};

struct BranchingRun {
  BranchingEnd end = BranchingEnd::extinct;
  double time = 0.0;
  std::uint64_t active = 0;
  std::uint64_t dormant = 0;
  std::vector<BranchingPoint> path;  // filled only on request
};

/// Active particles turn into two dormant ones at rate b, dormant ones
/// become active at rate k, and every particle dies at rate 1. Starts from
/// one dormant particle with probability start_dormant, else one active one.
BranchingRun simulate_two_type_branching(double b, double k, double t_max, Rng& rng,
                                         double start_dormant = 0.0,
                                         std::uint64_t population_cap = 100'000,
                                         bool record_path = false);

struct MeanfieldCounts {
  std::uint64_t n0 = 0;
  std::uint64_t n1 = 0;
  std::uint64_t n2 = 0;
};

/// All-to-all three-state chain. Any vertex in state >= 1 fires at rate
/// lambda*beta/n toward each other vertex, after which both sit in state 2;
/// 2 -> 1 at rate kappa and 1 -> 0 at rate 1. Returns the counts at each of
/// the (sorted) sample times.
std::vector<MeanfieldCounts> simulate_meanfield(std::uint64_t n, double lambda, double beta,
                                                double kappa, MeanfieldCounts initial,
                                                const std::vector<double>& sample_times, Rng& rng);

inline double meanfield_potential(const MeanfieldCounts& c, double C) {
  return static_cast<double>(c.n1) + C * static_cast<double>(c.n2);
}

}  // namespace acp
