#include "acp/qsd.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace acp {

TruncPoisson truncated_poisson(double beta_star, std::uint32_t L) {
  if (!(beta_star >= 0.0)) throw std::invalid_argument("beta_star must be non-negative");
  TruncPoisson tp{beta_star, L, std::vector<double>(L + 1, 0.0)};
  if (beta_star == 0.0) {
    tp.weights[0] = 1.0;
    return tp;
  }
  // Log weights, shifted by the largest before exponentiating.
  const double log_b = std::log(beta_star);
  std::vector<double> logw(L + 1);
  for (std::uint32_t x = 0; x <= L; ++x) logw[x] = x * log_b - std::lgamma(x + 1.0);
  const double top = *std::max_element(logw.begin(), logw.end());
  double sum = 0.0;
  for (std::uint32_t x = 0; x <= L; ++x) sum += tp.weights[x] = std::exp(logw[x] - top);
  for (double& w : tp.weights) w /= sum;
  return tp;
}

std::uint32_t default_truncation(double beta_star) {
  return static_cast<std::uint32_t>(std::ceil(10.0 * beta_star)) + 20;
}

StarGenerator star_generator(double beta_star, double kappa, double lambda, std::uint32_t L) {
  if (!(beta_star >= 0.0) || !(kappa >= 0.0) || !(lambda >= 0.0))
    throw std::invalid_argument("rates must be non-negative");
  if (L < 1) throw std::invalid_argument("truncation level must be at least 1");
  StarGenerator gen;
  gen.beta_star = beta_star;
  gen.kappa = kappa;
  gen.lambda = lambda;
  gen.L = L;
  gen.resample = truncated_poisson(beta_star, L);
  const std::size_t cols = L + 2;
  gen.entries.assign((L + 1) * cols, 0.0);
  for (std::uint32_t d = 0; d <= L; ++d) {
    double* row = &gen.entries[d * cols];
    for (std::uint32_t j = 0; j <= L; ++j)
      if (j != d) row[j] += kappa * gen.resample.weights[j];
    if (d > 0) row[d - 1] += kappa * d;
    if (d < L) row[d + 1] += kappa * beta_star;
    row[L + 1] = lambda * d;
    double out = 0.0;
    for (std::size_t j = 0; j < cols; ++j)
      if (j != d) out += row[j];
    row[d] = -out;
  }
  return gen;
}

namespace {

// y = alpha Q restricted to the transient states, using the tridiagonal plus
// rank-one structure of the generator.
void left_multiply(const StarGenerator& gen, const std::vector<double>& alpha,
                   std::vector<double>& y) {
  const std::uint32_t L = gen.L;
  const double mass = std::accumulate(alpha.begin(), alpha.end(), 0.0);
  const auto& p = gen.resample.weights;
  for (std::uint32_t j = 0; j <= L; ++j) {
    double v = alpha[j] * gen(j, j) + gen.kappa * p[j] * (mass - alpha[j]);
    if (j > 0) v += alpha[j - 1] * gen.kappa * gen.beta_star;
    if (j < L) v += alpha[j + 1] * gen.kappa * (j + 1);
    y[j] = v;
  }
}

}  // namespace

QsdResult quasi_stationary(const StarGenerator& gen, double tol, std::uint64_t max_iter) {
  const std::size_t n = gen.states();
  QsdResult res;
  if (gen.lambda == 0.0) {
    res.alpha = gen.resample.weights;
    res.rho = 0.0;
    res.residual = raw_residual(gen, res);
    return res;
  }
  double uniform_rate = 0.0;
  for (std::size_t i = 0; i < n; ++i) uniform_rate = std::max(uniform_rate, gen.exit_rate(i));
  // A little slack keeps every diagonal entry of the kernel positive (aperiodic).
  uniform_rate *= 1.05;

  std::vector<double> alpha = gen.resample.weights;
  std::vector<double> y(n);
  for (res.iterations = 1; res.iterations <= max_iter; ++res.iterations) {
    left_multiply(gen, alpha, y);
    // next = alpha P with P = I + Q / uniform_rate; theta is its mass.
    double theta = 0.0;
    for (std::size_t j = 0; j < n; ++j) theta += alpha[j] + y[j] / uniform_rate;
    double resid = 0.0;
    for (std::size_t j = 0; j < n; ++j)
      resid += std::abs(y[j] / uniform_rate + (1.0 - theta) * alpha[j]);
    res.rho = uniform_rate * (1.0 - theta);
    res.residual = resid;
    if (resid < tol) {
      res.alpha = alpha;
      return res;
    }
    for (std::size_t j = 0; j < n; ++j) alpha[j] = (alpha[j] + y[j] / uniform_rate) / theta;
  }
  res.iterations = max_iter;
  res.alpha = alpha;
  throw QsdNotConverged("quasi-stationary solve did not converge; residual " +
                            std::to_string(res.residual),
                        res);
}

double raw_residual(const StarGenerator& gen, const QsdResult& result) {
  std::vector<double> y(gen.states());
  left_multiply(gen, result.alpha, y);
  double r = 0.0;
  for (std::size_t j = 0; j < y.size(); ++j) r += std::abs(y[j] + result.rho * result.alpha[j]);
  return r;
}

FlowCheck flow_inequality_check(const StarGenerator& gen, const QsdResult& result,
                                std::uint32_t x) {
  if (x < 1 || x > gen.L) throw std::invalid_argument("threshold must lie in [1, L]");
  FlowCheck fc;
  for (std::uint32_t a = 0; a <= gen.L; ++a) {
    for (std::uint32_t b = 0; b <= gen.L; ++b) {
      if ((a < x) == (b < x)) continue;
      const double f = result.alpha[a] * gen(a, b);
      (a < x ? fc.flow_up : fc.flow_down) += f;
    }
  }
  fc.margin = fc.flow_up - fc.flow_down;
  // Rounding slack only; the two flows agree exactly when lambda = 0.
  fc.holds = fc.margin >= -1e-9 * (fc.flow_up + fc.flow_down);
  return fc;
}

QsdMoments qsd_moments(const QsdResult& result, double beta_star) {
  QsdMoments m;
  for (std::size_t d = 0; d < result.alpha.size(); ++d) {
    m.mean += result.alpha[d] * static_cast<double>(d);
    m.second_moment += result.alpha[d] * static_cast<double>(d) * static_cast<double>(d);
  }
  const double slack = 1e-12;
  m.mean_bound = m.mean <= beta_star * (1.0 + slack) + slack;
  const double second_cap = 4.0 / 3.0 * beta_star + beta_star * beta_star;
  m.second_bound = m.second_moment <= second_cap * (1.0 + slack) + slack;
  return m;
}

double total_variation(const std::vector<double>& p, const std::vector<double>& q) {
  const std::size_t n = std::max(p.size(), q.size());
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double a = i < p.size() ? p[i] : 0.0;
    const double b = i < q.size() ? q[i] : 0.0;
    s += std::abs(a - b);
  }
  return 0.5 * s;
}

namespace {

std::vector<double> cumulative(const std::vector<double>& w) {
  std::vector<double> cdf(w.size());
  std::partial_sum(w.begin(), w.end(), cdf.begin());
  return cdf;
}

std::uint32_t draw(const std::vector<double>& cdf, Rng& rng) {
  const double u = uniform01(rng) * cdf.back();
  const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
  return static_cast<std::uint32_t>(std::min<std::ptrdiff_t>(it - cdf.begin(),
                                                             static_cast<std::ptrdiff_t>(cdf.size()) - 1));
}

}  // namespace

StarHittingSampler::StarHittingSampler(const StarGenerator& gen, const std::vector<double>& init_law)
    : gen_(gen), init_cdf_(cumulative(init_law)), resample_cdf_(cumulative(gen.resample.weights)) {
  if (init_law.size() != gen.states()) throw std::invalid_argument("initial law has wrong size");
}

HittingSample StarHittingSampler::sample(Rng& rng, std::uint64_t max_events) const {
  HittingSample out;
  if (gen_.lambda == 0.0) return out;
  std::uint32_t d = draw(init_cdf_, rng);
  const double kappa = gen_.kappa;
  const auto& p = gen_.resample.weights;
  double t = 0.0;
  while (out.events < max_events) {
    const double down = kappa * d;
    const double up = d < gen_.L ? kappa * gen_.beta_star : 0.0;
    const double jump = kappa * (1.0 - p[d]);
    const double absorb = gen_.lambda * d;
    const double total = down + up + jump + absorb;
    ++out.events;
    if (!(total > 0.0)) break;  // stuck at a state with no exits
    t += exponential(rng, total);
    double u = uniform01(rng) * total;
    if (u < absorb) {
      out.time = t;
      return out;
    }
    u -= absorb;
    if (u < down) {
      --d;
    } else if (u - down < up || jump == 0.0) {
      d = up > 0.0 ? d + 1 : d - 1;
    } else {
      std::uint32_t j = d;
      while (j == d) j = draw(resample_cdf_, rng);
      d = j;
    }
  }
  return out;
}

HittingSample simulate_star_hitting_time(double beta_star, double kappa, double lambda,
                                         std::uint32_t L, StarInit init, Rng& rng,
                                         std::uint64_t max_events) {
  if (lambda == 0.0) return {};
  const StarGenerator gen = star_generator(beta_star, kappa, lambda, L);
  const std::vector<double> law =
      init == StarInit::qsd ? quasi_stationary(gen).alpha : gen.resample.weights;
  return StarHittingSampler(gen, law).sample(rng, max_events);
}

}  // namespace acp
