#include <algorithm>
#include <limits>
#include <stdexcept>

#include "acp/theory.hpp"

namespace acp {

BranchingRun simulate_two_type_branching(double b, double k, double t_max, Rng& rng,
                                         double start_dormant, std::uint64_t population_cap,
                                         bool record_path) {
  if (!(b >= 0.0) || !(k >= 0.0) || !(t_max >= 0.0))
    throw std::invalid_argument("rates and horizon must be non-negative");
  if (!(start_dormant >= 0.0 && start_dormant <= 1.0))
    throw std::invalid_argument("start_dormant must be a probability");
  BranchingRun run;
  if (uniform01(rng) < start_dormant) {
    run.dormant = 1;
  } else {
    run.active = 1;
  }
  double t = 0.0;
  if (record_path) run.path.push_back({t, run.active, run.dormant});
  while (run.active + run.dormant > 0) {
    if (run.active + run.dormant >= population_cap) {
      run.end = BranchingEnd::population_cap;
      run.time = t;
      return run;
    }
    const auto a = static_cast<double>(run.active);
    const auto d = static_cast<double>(run.dormant);
    const double split = b * a;
    const double wake = k * d;
    const double total = split + wake + a + d;
    t += exponential(rng, total);
    if (t >= t_max) {
      run.end = BranchingEnd::alive_at_t_max;
      run.time = t_max;
      return run;
    }
    double u = uniform01(rng) * total;
    if (u < split) {
      --run.active;
      run.dormant += 2;
    } else if ((u -= split) < wake) {
      --run.dormant;
      ++run.active;
    } else if (u - wake < a && run.active > 0) {
      --run.active;
    } else if (run.dormant > 0) {
      --run.dormant;
    } else {
      --run.active;
    }
    if (record_path) run.path.push_back({t, run.active, run.dormant});
  }
  run.end = BranchingEnd::extinct;
  run.time = t;
  return run;
}

std::vector<MeanfieldCounts> simulate_meanfield(std::uint64_t n, double lambda, double beta,
                                                double kappa, MeanfieldCounts initial,
                                                const std::vector<double>& sample_times, Rng& rng) {
  if (n == 0) throw std::invalid_argument("n must be at least 1");
  if (!(lambda >= 0.0) || !(beta >= 0.0) || !(kappa >= 0.0))
    throw std::invalid_argument("parameters must be non-negative");
  if (initial.n0 + initial.n1 + initial.n2 != n)
    throw std::invalid_argument("initial counts must add up to n");
  if (!std::is_sorted(sample_times.begin(), sample_times.end()))
    throw std::invalid_argument("sample times must be sorted");

  std::vector<MeanfieldCounts> out;
  out.reserve(sample_times.size());
  MeanfieldCounts c = initial;
  const double per_pair = lambda * beta / static_cast<double>(n);
  const auto others = static_cast<double>(n - 1);
  double t = 0.0;
  std::size_t next = 0;
  while (next < sample_times.size()) {
    const double infect = per_pair * others * static_cast<double>(c.n1 + c.n2);
    const double cool = kappa * static_cast<double>(c.n2);
    const double recover = static_cast<double>(c.n1);
    const double total = infect + cool + recover;
    const double dt = total > 0.0 ? exponential(rng, total) : std::numeric_limits<double>::infinity();
    while (next < sample_times.size() && t + dt > sample_times[next]) {
      out.push_back(c);
      ++next;
    }
    if (next == sample_times.size()) break;
    t += dt;
    double u = uniform01(rng) * total;
    if (u < infect) {
      // Source uniform over state >= 1, target uniform over the other n - 1.
      const bool source_is_one = uniform_index(rng, c.n1 + c.n2) < c.n1;
      const std::uint64_t t1 = c.n1 - (source_is_one ? 1 : 0);
      const std::uint64_t pick = uniform_index(rng, n - 1);
      if (source_is_one) {
        --c.n1;
        ++c.n2;
      }
      if (pick < c.n0) {
        --c.n0;
        ++c.n2;
      } else if (pick < c.n0 + t1) {
        --c.n1;
        ++c.n2;
      }
    } else if ((u -= infect) < cool) {
      --c.n2;
      ++c.n1;
    } else if (c.n1 > 0) {
      --c.n1;
      ++c.n0;
    } else {
      --c.n2;
      ++c.n1;
    }
  }
  return out;
}

}  // namespace acp
