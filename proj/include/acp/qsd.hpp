#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "acp/rng.hpp"

namespace acp {

struct TruncPoisson {
  double beta_star = 0.0;
  std::uint32_t L = 0;
  std::vector<double> weights;  // on {0..L}
};

/// Poisson(beta_star) conditioned on {0..L}.
TruncPoisson truncated_poisson(double beta_star, std::uint32_t L);

/// Default truncation level for a given beta_star.
std::uint32_t default_truncation(double beta_star);

/// Degree chain of an infected star centre on {0..L} plus an absorbing state
/// (index L + 1): down at kappa*d, up at kappa*beta_star, resample from the
/// truncated Poisson at rate kappa, absorb at lambda*d.
struct StarGenerator {
  double beta_star = 0.0;
  double kappa = 0.0;
  double lambda = 0.0;
  std::uint32_t L = 0;
  TruncPoisson resample;
  std::vector<double> entries;  // row-major (L+1) x (L+2)

  std::size_t states() const { return L + 1; }
  std::size_t absorbing() const { return L + 1; }
  double operator()(std::size_t i, std::size_t j) const { return entries[i * (L + 2) + j]; }
  double exit_rate(std::size_t i) const { return -(*this)(i, i); }
};

StarGenerator star_generator(double beta_star, double kappa, double lambda, std::uint32_t L);

struct QsdResult {
  std::vector<double> alpha;
  double rho = 0.0;
  std::uint64_t iterations = 0;
  /// ||alpha Q + rho alpha||_1 divided by the uniformization rate.
  double residual = 0.0;
};

class QsdNotConverged : public std::runtime_error {
 public:
  QsdNotConverged(const std::string& what, QsdResult partial)
      : std::runtime_error(what), partial_(std::move(partial)) {}
  const QsdResult& partial() const { return partial_; }

 private:
  QsdResult partial_;
};

/// Left Perron vector of the uniformized sub-stochastic kernel. Throws
/// QsdNotConverged after max_iter iterations above tol.
QsdResult quasi_stationary(const StarGenerator& gen, double tol = 1e-12,
                           std::uint64_t max_iter = 1'000'000);

/// ||alpha Q + rho alpha||_1 without the uniformization scaling.
double raw_residual(const StarGenerator& gen, const QsdResult& result);

struct FlowCheck {
  bool holds = false;
  double margin = 0.0;  // flow A -> B minus flow B -> A
  double flow_up = 0.0;
  double flow_down = 0.0;
};

/// Probability flow across the cut {0..x-1} | {x..L} under alpha.
/// Throws std::invalid_argument unless 1 <= x <= L.
FlowCheck flow_inequality_check(const StarGenerator& gen, const QsdResult& result, std::uint32_t x);

struct QsdMoments {
  double mean = 0.0;
  double second_moment = 0.0;
  bool mean_bound = false;    // mean <= beta_star
  bool second_bound = false;  // second moment <= 4/3 beta_star + beta_star^2
};

QsdMoments qsd_moments(const QsdResult& result, double beta_star);

double total_variation(const std::vector<double>& p, const std::vector<double>& q);

enum class StarInit { truncated_poisson, qsd };

struct HittingSample {
  std::optional<double> time;  // absent when the event budget ran out
  std::uint64_t events = 0;
};

/// Exact simulation of the degree chain until absorption, with the starting
/// degree drawn from `init_law`. Reusable across samples.
class StarHittingSampler {
 public:
  StarHittingSampler(const StarGenerator& gen, const std::vector<double>& init_law);
  HittingSample sample(Rng& rng, std::uint64_t max_events = 100'000'000) const;

 private:
  StarGenerator gen_;
  std::vector<double> init_cdf_;
  std::vector<double> resample_cdf_;
};

/// One hitting time; the QSD start solves for alpha first. lambda = 0 gives
/// the budget flag straight away since absorption is unreachable.
HittingSample simulate_star_hitting_time(double beta_star, double kappa, double lambda,
                                         std::uint32_t L, StarInit init, Rng& rng,
                                         std::uint64_t max_events = 100'000'000);

}  // namespace acp
