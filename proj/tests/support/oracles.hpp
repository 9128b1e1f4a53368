#pragma once
// Independent reference computations used by the unit and acceptance tests.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <vector>

#include "acp/host_tree.hpp"
#include "acp/rng.hpp"

namespace oracle {

struct MeanSe {
  double mean = 0.0;
  double se = 0.0;
};

inline MeanSe mean_se(const std::vector<double>& xs) {
  const auto n = static_cast<double>(xs.size());
  double m = 0.0;
  for (double x : xs) m += x;
  m /= n;
  double ss = 0.0;
  for (double x : xs) ss += (x - m) * (x - m);
  return {m, std::sqrt(ss / (n - 1.0) / n)};
}

/// sup |F_n - F| for a continuous reference CDF.
inline double ks_one_sample(std::vector<double> xs, const std::function<double(double)>& cdf) {
  std::sort(xs.begin(), xs.end());
  const auto n = static_cast<double>(xs.size());
  double d = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double f = cdf(xs[i]);
    d = std::max({d, (static_cast<double>(i) + 1.0) / n - f, f - static_cast<double>(i) / n});
  }
  return d;
}

/// sup |F_a - F_b|, evaluated after all ties at each value.
inline double ks_two_sample(std::vector<double> a, std::vector<double> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  std::size_t i = 0;
  std::size_t j = 0;
  double d = 0.0;
  while (i < a.size() || j < b.size()) {
    double v;
    if (j == b.size() || (i < a.size() && a[i] <= b[j])) {
      v = a[i];
    } else {
      v = b[j];
    }
    while (i < a.size() && a[i] == v) ++i;
    while (j < b.size() && b[j] == v) ++j;
    const double fa = static_cast<double>(i) / static_cast<double>(a.size());
    const double fb = static_cast<double>(j) / static_cast<double>(b.size());
    d = std::max(d, std::abs(fa - fb));
  }
  return d;
}

// Asymptotic Kolmogorov quantiles.
inline double ks_critical_1pct(std::size_t n) { return 1.628 / std::sqrt(static_cast<double>(n)); }
inline double ks_critical_5pct(std::size_t n) { return 1.358 / std::sqrt(static_cast<double>(n)); }
inline double ks2_critical_1pct(std::size_t n, std::size_t m) {
  const auto nn = static_cast<double>(n);
  const auto mm = static_cast<double>(m);
  return 1.628 * std::sqrt((nn + mm) / (nn * mm));
}

/// Counts, by size, the node subsets that contain the root and are closed
/// under taking parents. Exhaustive over all 2^n subsets.
inline std::vector<std::uint64_t> brute_force_subtree_counts(const acp::HostTree& tree) {
  const std::size_t n = tree.size();
  std::vector<std::uint64_t> counts(n + 1, 0);
  counts[0] = 1;
  for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << n); ++mask) {
    if (!(mask & 1)) continue;
    bool closed = true;
    for (std::size_t v = 1; v < n && closed; ++v)
      if ((mask >> v) & 1) closed = (mask >> tree.parent(static_cast<acp::Node>(v))) & 1;
    if (closed) ++counts[static_cast<std::size_t>(__builtin_popcountll(mask))];
  }
  return counts;
}

inline double evaluate_counts(const std::vector<std::uint64_t>& counts, double w) {
  double z = 0.0;
  double p = 1.0;
  for (std::uint64_t c : counts) {
    z += static_cast<double>(c) * p;
    p *= w;
  }
  return z;
}

/// Random children-count sequence (breadth-first) of a tree with exactly n nodes:
/// each new node attaches to a uniformly chosen earlier node, then ids are
/// relabelled breadth-first.
inline std::vector<std::uint32_t> random_tree_counts(std::size_t n, acp::Rng& rng) {
  std::vector<std::vector<std::size_t>> kids(n);
  for (std::size_t v = 1; v < n; ++v) kids[acp::uniform_index(rng, v)].push_back(v);
  std::vector<std::uint32_t> counts;
  std::vector<std::size_t> queue{0};
  for (std::size_t h = 0; h < queue.size(); ++h) {
    counts.push_back(static_cast<std::uint32_t>(kids[queue[h]].size()));
    for (std::size_t c : kids[queue[h]]) queue.push_back(c);
  }
  return counts;
}

/// Largest eigenvalue of the real 2x2 matrix [[a, b], [c, d]] (real spectrum assumed).
inline double top_eigenvalue_2x2(double a, double b, double c, double d) {
  const double tr = a + d;
  const double det = a * d - b * c;
  return 0.5 * (tr + std::sqrt(tr * tr - 4.0 * det));
}

/// Poisson(mean) pmf on {0..L} by recursion in long double, plus the upper tail mass.
inline std::vector<long double> poisson_pmf(double mean, std::size_t L, long double* tail = nullptr) {
  std::vector<long double> p(L + 1);
  p[0] = std::exp(-static_cast<long double>(mean));
  long double s = p[0];
  for (std::size_t k = 1; k <= L; ++k) {
    p[k] = p[k - 1] * mean / static_cast<long double>(k);
    s += p[k];
  }
  if (tail) *tail = std::max(0.0L, 1.0L - s);
  return p;
}

}  // namespace oracle
