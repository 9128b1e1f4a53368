#include "acp/theory.hpp"

#include <cmath>
#include <numbers>

namespace acp {

namespace {
constexpr double e = std::numbers::e;
constexpr double pi = std::numbers::pi;

void require_nonnegative(double lambda, double beta, double kappa) {
  if (!(lambda >= 0.0) || !(beta >= 0.0) || !(kappa >= 0.0))
    throw std::invalid_argument("parameters must be non-negative");
}
}  // namespace

double sir_offspring_mean(double lambda, double beta, double kappa) {
  require_nonnegative(lambda, beta, kappa);
  return beta * lambda / (1.0 + 2.0 * kappa + lambda);
}

namespace {
// beta*lambda/(kappa+lambda), taken as 0 when kappa = lambda = 0.
double pruned_mean_degree(double lambda, double beta, double kappa) {
  return kappa + lambda > 0.0 ? beta * lambda / (kappa + lambda) : 0.0;
}
}  // namespace

double meta_offspring_lower_bound(double lambda, double beta, double kappa) {
  const double mu = sir_offspring_mean(lambda, beta, kappa);
  if (mu >= 1.0) throw DomainError("meta-offspring bound needs the pruned SIR mean below 1");
  const double one_minus_p0 = -std::expm1(-pruned_mean_degree(lambda, beta, kappa)) *
                              (lambda + kappa) / (1.0 + lambda + 2.0 * kappa);
  return kappa / (1.0 + kappa) * one_minus_p0 / (1.0 - mu * mu);
}

double branching_top_eigenvalue_bk(double b, double k) {
  return 0.5 * (std::sqrt(k * k + 6.0 * k * b + b * b) - 2.0 - k - b);
}

double branching_top_eigenvalue(double lambda, double beta, double kappa, double delta,
                                double eps) {
  require_nonnegative(lambda, beta, kappa);
  if (!(delta >= 0.0 && delta < 1.0) || !(eps >= 0.0 && eps < 1.0))
    throw std::invalid_argument("delta and eps must lie in [0, 1)");
  return branching_top_eigenvalue_bk(lambda * beta * (1.0 - delta), kappa * (1.0 - eps));
}

MeanfieldDecay meanfield_decay(double lambda, double beta, double kappa) {
  require_nonnegative(lambda, beta, kappa);
  MeanfieldDecay out;
  const double x = lambda * beta;
  const double root = std::sqrt((1.0 - kappa) * (1.0 - kappa) + 4.0 * x * (1.0 + kappa + x));
  out.eps_decay = 0.5 * (1.0 + kappa) - 0.5 * root;
  if (x > 0.0) {
    out.C = (1.0 - kappa + 2.0 * x + root) / (4.0 * x);
    out.defined = true;
  }
  return out;
}

double z_bound(double lambda, double beta) {
  if (!(lambda >= 0.0) || !(beta >= 0.0)) throw std::invalid_argument("parameters must be non-negative");
  const double x = lambda * beta;
  if (x * e >= 1.0) throw DomainError("partition-function bound needs lambda*beta*e < 1");
  return 1.0 + lambda + beta * lambda * lambda +
         std::pow(e, 3) * std::pow(lambda, 3) * beta * beta / (3.0 * std::sqrt(6.0 * pi) * (1.0 - x * e));
}

std::uint32_t slow_factor_argmin(double rho) {
  if (!(rho > 1.0)) throw DomainError("slowdown base must exceed 1");
  // ratio of consecutive terms is rho (k-1)/k; once it reaches 1 it stays >= 1.
  std::uint32_t best_k = 2;
  double best = rho * rho;
  double term = best;
  for (std::uint32_t k = 2;; ++k) {
    const double ratio = rho * static_cast<double>(k - 1) / static_cast<double>(k);
    if (ratio >= 1.0) break;
    term *= ratio;
    if (term < best) {
      best = term;
      best_k = k + 1;
    }
  }
  return best_k;
}

double slow_factor_theta(double rho) {
  const std::uint32_t k = slow_factor_argmin(rho);
  return std::pow(rho, k) / static_cast<double>(k - 1);
}

double infection_mean_bound(double x) {
  if (!(x >= 0.0)) throw std::invalid_argument("lambda*beta must be non-negative");
  if (x * e > 0.75) throw DomainError("infection-set bound needs lambda*beta*e <= 3/4");
  return 1.0 + 27.0 * x / 16.0 *
                   (1.0 + std::sqrt(2.0 / (3.0 * pi)) * 2.0 * std::pow(e, 3) * x / (9.0 - 12.0 * x * e));
}

namespace {
double quad_a() { return 81.0 * e / 4.0 - std::sqrt(2.0 / (3.0 * pi)) * 27.0 * std::pow(e, 3) / 8.0; }
double quad_b() { return 12.0 * e + 243.0 / 16.0; }
}  // namespace

double subcritical_quadratic(double x) { return quad_a() * x * x - quad_b() * x + 9.0; }

double subcritical_constant() {
  const double a = quad_a();
  const double b = quad_b();
  const double disc = b * b - 36.0 * a;
  // Smaller root in the cancellation-free form 2c / (b + sqrt(disc)).
  return 18.0 / (b + std::sqrt(disc));
}

double subcritical_constant_closed_form() {
  const double s = std::sqrt(6.0 / pi);
  const double num =
      81.0 + 64.0 * e -
      std::sqrt(1152.0 * std::pow(e, 3) * s + 4096.0 * e * e - 10368.0 * e + 6561.0);
  return num / (12.0 * e * (18.0 - e * e * s));
}

double supercritical_radicand(double lambda, double beta, double kappa) {
  require_nonnegative(lambda, beta, kappa);
  const double frac = kappa * (lambda + kappa) * -std::expm1(-pruned_mean_degree(lambda, beta, kappa)) /
                      ((1.0 + kappa) * (1.0 + 2.0 * kappa + lambda));
  return 1.0 - frac;
}

TheoryReport evaluate_conditions(double lambda, double beta, double kappa) {
  require_nonnegative(lambda, beta, kappa);
  TheoryReport r;
  r.lambda = lambda;
  r.beta = beta;
  r.kappa = kappa;
  const double x = lambda * beta;
  r.mu = sir_offspring_mean(lambda, beta, kappa);

  r.thm1a_small_lb = x < 0.21;
  r.thm1a_large_kappa = (2.0 * beta - 1.0) * lambda < kappa;
  const double radicand = supercritical_radicand(lambda, beta, kappa);
  if (radicand < 0.0) {
    r.radicand_guard = true;
    r.thm1b = r.mu > 0.0;
  } else {
    r.thm1b = r.mu > std::sqrt(radicand);
  }
  r.thm1b_simple = x > 1.0 + 2.0 * kappa + lambda;
  r.thm2_sub = x < 1.0;
  r.thm2_super = x > 1.0;

  if (r.mu < 1.0) r.meta_lower_bound = meta_offspring_lower_bound(lambda, beta, kappa);
  r.branching_eig = branching_top_eigenvalue(lambda, beta, kappa, 0.0, 0.0);
  const MeanfieldDecay mf = meanfield_decay(lambda, beta, kappa);
  if (mf.defined) {
    r.meanfield_C = mf.C;
    r.meanfield_eps = mf.eps_decay;
  }
  if (x * e < 1.0) r.z_bound = z_bound(lambda, beta);
  if (x * e <= 0.75) r.infection_mean_bound = infection_mean_bound(x);
  return r;
}

}  // namespace acp
