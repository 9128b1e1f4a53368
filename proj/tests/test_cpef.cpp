#include <doctest.h>

#include <cmath>
#include <vector>

#include "acp/cpef.hpp"
#include "acp/scp.hpp"
#include "acp/theory.hpp"
#include "support/oracles.hpp"

using namespace acp;

namespace {

HostTree tree_of(std::vector<std::uint32_t> counts) { return HostTree::from_children_counts(counts); }

// Trees used by the Kac checks.
std::vector<std::vector<std::uint32_t>> fixed_trees() {
  return {
      {0},                 // single vertex
      {2, 0, 0},           // root with two leaves
      {1, 1, 1, 0},        // path of four
      {2, 1, 1, 0, 0},     // two branches of length two
      {3, 2, 0, 0, 1, 0, 0},
  };
}

}  // namespace

TEST_CASE("host trees") {
  SUBCASE("from_children_counts") {
    const HostTree t = tree_of({2, 1, 0, 0});
    REQUIRE(t.size() == 4);
    CHECK(t.complete());
    CHECK(t.parent(0) == HostTree::no_parent);
    CHECK(t.parent(1) == 0);
    CHECK(t.parent(2) == 0);
    CHECK(t.parent(3) == 1);
    CHECK(t.depth(3) == 2);
    CHECK(t.first_child(0) == 1);
    CHECK(t.child_count(0) == 2);
    CHECK_THROWS_AS(tree_of({1, 0, 0}), std::invalid_argument);  // forest
    CHECK_THROWS_AS(tree_of({3, 0}), std::invalid_argument);
    CHECK_THROWS_AS(tree_of({}), std::invalid_argument);
  }
  SUBCASE("beta = 0 gives a lone root") {
    Rng rng = make_rng(301);
    const HostTree t = sample_gw_tree(0.0, 10, rng);
    CHECK(t.size() == 1);
    CHECK(t.complete());
    CHECK(!t.capped());
  }
  SUBCASE("subcritical trees are finite") {
    Rng rng = make_rng(302);
    for (int i = 0; i < 10'000; ++i) {
      const HostTree t = sample_gw_tree(0.5, 1'000'000, rng);
      REQUIRE(!t.capped());
      REQUIRE(t.complete());
    }
  }
  SUBCASE("root offspring mean") {
    Rng rng = make_rng(303);
    double sum = 0.0;
    for (int i = 0; i < 10'000; ++i) {
      HostTree t(3.0, 1'000);
      REQUIRE(t.expand(0, rng));
      sum += t.child_count(0);
    }
    CHECK(std::abs(sum / 1e4 - 3.0) < 0.06);
  }
  SUBCASE("structure and cap") {
    Rng rng = make_rng(304);
    const HostTree t = sample_gw_tree(3.0, 500, rng);
    CHECK(t.size() <= 500);
    for (Node v = 1; v < t.size(); ++v) {
      REQUIRE(t.parent(v) < v);
      REQUIRE(t.depth(v) == t.depth(t.parent(v)) + 1);
    }
    HostTree small(3.0, 1);
    Rng r2 = make_rng(9);
    while (small.expand(0, r2)) small = HostTree(3.0, 1);  // retry until a child is drawn
    CHECK(small.capped());
    CHECK(small.size() == 1);
  }
}

TEST_CASE("host infection") {
  Rng rng = make_rng(310);
  SUBCASE("lambda = 0") {
    for (int i = 0; i < 1000; ++i) {
      HostTree t(3.0, 1'000'000);
      const HostOutcome h = run_host_infection(t, 0.0, 2.0, rng);
      REQUIRE(h.ever_infected == 1);
      REQUIRE(h.meta_offspring == 0);
    }
  }
  SUBCASE("kappa = 0") {
    for (int i = 0; i < 1000; ++i) {
      HostTree t(3.0, 1'000'000);
      REQUIRE(run_host_infection(t, 0.2, 0.0, rng).meta_offspring == 0);
    }
  }
  SUBCASE("meta offspring never exceed ever infected minus one") {
    for (int i = 0; i < 20'000; ++i) {
      const double lambda = 1.5 * uniform01(rng);
      const double kappa = 4.0 * uniform01(rng);
      HostTree t(1.0 + 3.0 * uniform01(rng), 100'000);
      HostLimits lim;
      lim.max_ever_infected = 10'000;
      const HostOutcome h = run_host_infection(t, lambda, kappa, rng, lim);
      if (h.capped) continue;
      REQUIRE(h.ever_infected >= 1);
      REQUIRE(h.meta_offspring + 1 <= h.ever_infected);
      REQUIRE(h.duration > 0.0);
    }
  }
  SUBCASE("caps are reported") {
    HostLimits lim;
    lim.max_ever_infected = 5;
    bool capped = false;
    for (int i = 0; i < 200 && !capped; ++i) {
      HostTree fresh(3.0, 1'000'000);
      capped = run_host_infection(fresh, 3.0, 0.1, rng, lim).capped;
    }
    CHECK(capped);
  }
}

TEST_CASE("meta-offspring estimates") {
  SUBCASE("kappa = 0") {
    Rng rng = make_rng(320);
    const MetaOffspringEstimate est = estimate_meta_offspring({1.0, 0.0, 3.0}, 100, rng);
    CHECK(est.mean == 0.0);
    CHECK(est.std_error == 0.0);
  }
  SUBCASE("above the lower bound") {
    for (CpefParams p : {CpefParams{1.0, 1.0, 3.0}, CpefParams{0.05, 1.0, 3.0}}) {
      Rng rng = make_rng(321);
      const MetaOffspringEstimate est = estimate_meta_offspring(p, 10'000, rng);
      CHECK(est.capped_hosts == 0);
      CHECK(est.mean >= meta_offspring_lower_bound(p.lambda, p.beta, p.kappa) - 3.0 * est.std_error);
    }
  }
  SUBCASE("large kappa keeps the meta tree subcritical") {
    Rng rng = make_rng(322);
    const MetaOffspringEstimate est = estimate_meta_offspring({1.0, 6.0, 3.0}, 10'000, rng);
    CHECK(est.mean < 1.0 + 3.0 * est.std_error);
  }
  Rng rng = make_rng(323);
  CHECK_THROWS_AS(estimate_meta_offspring({}, 1, rng), std::invalid_argument);
}

TEST_CASE("forest runs") {
  SUBCASE("kappa = 0 is a single host") {
    Rng rng = make_rng(330);
    for (int i = 0; i < 500; ++i) {
      const CpefOutcome o = run_cpef({0.3, 0.0, 3.0}, {}, rng);
      REQUIRE(o.trees_infected == 1);
      REQUIRE(o.max_meta_depth == 0);
      REQUIRE(o.termination == Termination::extinct);
    }
  }
  SUBCASE("small lambda*beta dies out") {
    Rng rng = make_rng(331);
    int budget = 0;
    double total = 0.0;
    for (int i = 0; i < 10'000; ++i) {
      const CpefOutcome o = run_cpef({0.05, 1.0, 3.0}, {}, rng);
      budget += o.termination == Termination::budget_exceeded;
      total += double(o.total_ever_infected);
      REQUIRE(o.trees_infected >= 1);
      REQUIRE(o.total_ever_infected >= o.trees_infected);
    }
    CHECK(budget / 1e4 < 1e-2);
    CHECK(total / 1e4 < 3.0);
  }
  SUBCASE("supercritical parameters exhaust the budget") {
    Rng rng = make_rng(332);
    int budget = 0;
    for (int i = 0; i < 1000; ++i)
      budget += run_cpef({2.0, 1.0, 3.0}, {10'000, 10'000, 1'000'000}, rng).termination ==
                Termination::budget_exceeded;
    CHECK(budget / 1e3 > 0.05);
  }
  Rng rng = make_rng(333);
  CHECK_THROWS_AS(run_cpef({}, {0, 1, 1}, rng), std::invalid_argument);
}

TEST_CASE("exact subtree partition") {
  CHECK(exact_subtree_partition(tree_of({0}), 0.3).value == doctest::Approx(1.3));
  CHECK(exact_subtree_partition(tree_of({1, 0}), 0.3).value == doctest::Approx(1 + 0.3 + 0.09));
  CHECK(exact_subtree_partition(tree_of({2, 0, 0}), 0.3).value ==
        doctest::Approx(1 + 0.3 + 2 * 0.09 + 0.027));
  CHECK(exact_subtree_partition(tree_of({0}), 0.0).value == 1.0);

  SUBCASE("agrees with exhaustive enumeration") {
    Rng rng = make_rng(340);
    for (int i = 0; i < 2000; ++i) {
      const std::size_t n = 1 + uniform_index(rng, 8);
      const HostTree t = tree_of(oracle::random_tree_counts(n, rng));
      const auto brute = oracle::brute_force_subtree_counts(t);
      REQUIRE(subtree_size_counts(t) == brute);
      // dyadic weights keep every partial product exact
      for (double w : {0.5, 1.0, 2.0, 0.25})
        REQUIRE(exact_subtree_partition(t, w).value == oracle::evaluate_counts(brute, w));
      REQUIRE(exact_subtree_partition(t, 0.37).value ==
              doctest::Approx(oracle::evaluate_counts(brute, 0.37)).epsilon(1e-13));
    }
  }
  SUBCASE("overflow is flagged") {
    const PartitionValue p = exact_subtree_partition(tree_of({1, 1, 1, 0}), 1e200);
    CHECK(p.overflow);
    CHECK(!exact_subtree_partition(tree_of({1, 1, 1, 0}), 1e50).overflow);
  }
  CHECK_THROWS_AS(exact_subtree_partition(tree_of({0}), -1.0), std::invalid_argument);
}

TEST_CASE("subtree contact process") {
  SUBCASE("invariants along a run") {
    Rng rng = make_rng(350);
    for (int i = 0; i < 200; ++i) {
      const HostTree t = tree_of(oracle::random_tree_counts(1 + uniform_index(rng, 30), rng));
      SubtreeContactProcess p(t, 0.2 + uniform01(rng), 1.0 + uniform01(rng));
      p.reset_to_root();
      for (int s = 0; s < 200; ++s) {
        const double hold = p.step(rng);
        REQUIRE(hold > 0.0);
        REQUIRE(p.consistent());
        for (Node v = 1; v < t.size(); ++v)
          if (p.infected(v)) REQUIRE(p.infected(t.parent(v)));
      }
    }
  }
  SUBCASE("single vertex: Exp with mean rho") {
    const HostTree t = tree_of({0});
    for (double rho : {1.0, 1.7}) {
      Rng rng = make_rng(351);
      std::vector<double> r;
      for (int i = 0; i < 10'000; ++i) r.push_back(run_scp(t, 0.4, rho, rng).recovery_time);
      const auto ms = oracle::mean_se(r);
      CHECK(std::abs(ms.mean - rho) < 3.0 * ms.se);
      CHECK(oracle::ks_one_sample(r, [rho](double x) { return -std::expm1(-x / rho); }) <
            oracle::ks_critical_1pct(r.size()));
    }
  }
  SUBCASE("star with two leaves: Kac value 1.21") {
    const HostTree t = tree_of({2, 0, 0});
    const double kac = (exact_subtree_partition(t, 0.1).value - 1.0) / 0.1;
    CHECK(kac == doctest::Approx(1.21));
    Rng rng = make_rng(352);
    std::vector<double> r;
    for (int i = 0; i < 100'000; ++i) r.push_back(run_scp(t, 0.1, 1.0, rng).recovery_time);
    const auto ms = oracle::mean_se(r);
    CHECK(std::abs(ms.mean - 1.21) < 3.0 * ms.se);
  }
  SUBCASE("slowed process obeys Kac on fixed trees") {
    const double lambda = 0.3;
    const double rho = 1.25;
    for (const auto& counts : fixed_trees()) {
      const HostTree t = tree_of(counts);
      const double kac = (exact_subtree_partition(t, lambda * rho).value - 1.0) / lambda;
      Rng rng = make_rng(353);
      std::vector<double> r;
      for (int i = 0; i < 20'000; ++i) r.push_back(run_scp(t, lambda, rho, rng).recovery_time);
      const auto ms = oracle::mean_se(r);
      CHECK(std::abs(ms.mean - kac) < 3.0 * ms.se);
    }
  }
  SUBCASE("stationary occupation is proportional to lambda^|T|") {
    const HostTree t = tree_of({2, 1, 1, 0, 0});
    const double lambda = 0.2;
    const auto counts = subtree_size_counts(t);
    const double z = exact_subtree_partition(t, lambda).value;
    Rng rng = make_rng(354);
    const double t_end = 2e7;
    const auto occ = scp_occupation(t, lambda, 1.0, t_end, rng);
    std::uint64_t states = 0;
    for (std::size_t k = 0; k < counts.size(); ++k) states += counts[k];
    CHECK(occ.size() == states);
    double total = 0.0;
    for (const auto& [mask, time] : occ) {
      total += time;
      const double expected = std::pow(lambda, __builtin_popcountll(mask)) / z;
      CAPTURE(mask);
      CHECK(std::abs(time / t_end - expected) < 0.05 * expected);
    }
    CHECK(total == doctest::Approx(t_end));
  }
  SUBCASE("dominates the plain contact process under coupling") {
    Rng rng = make_rng(355);
    for (const auto& counts : fixed_trees()) {
      const HostTree t = tree_of(counts);
      for (double lambda : {0.3, 1.0, 3.0})
        for (int i = 0; i < 2000; ++i) {
          const CoupledCounts c = coupled_scp_contact(t, lambda, rng);
          REQUIRE(c.subtree_process >= c.contact_process);
          REQUIRE(c.contact_process >= 1);
        }
    }
  }
  SUBCASE("partition function over Galton-Watson trees stays below the bound") {
    Rng rng = make_rng(356);
    std::vector<double> z;
    int capped = 0;
    for (int i = 0; i < 10'000; ++i) {
      const HostTree t = sample_gw_tree(3.0, 10'000, rng);
      capped += t.capped();
      const PartitionValue p = exact_subtree_partition(t, 0.1);
      REQUIRE(!p.overflow);
      z.push_back(p.value);
    }
    const auto ms = oracle::mean_se(z);
    CHECK(ms.mean <= z_bound(0.1, 3.0) + 3.0 * ms.se);
    CHECK(capped > 0);  // the cap truncates some trees, which only lowers Z
  }
  const HostTree t = tree_of({0});
  CHECK_THROWS_AS(SubtreeContactProcess(t, 1.0, 0.5), std::invalid_argument);
  HostTree open(3.0, 10);
  CHECK_THROWS_AS(SubtreeContactProcess(open, 1.0, 1.0), std::invalid_argument);
}
