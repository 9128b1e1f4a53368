#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "acp/report.hpp"
#include "acp/sweep.hpp"
#include "acp/theory.hpp"

using namespace acp;

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) out.push_back(cur);
  if (!s.empty() && s.back() == sep) out.emplace_back();
  return out;
}

std::vector<std::string> lines(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

SweepConfig small_config() {
  SweepConfig c;
  c.lambda_grid = {0.5, 1.5};
  c.kappa_grid = {0.5, 1.0};
  c.n = 100;
  c.samples = 10;
  c.seed = 7;
  return c;
}

std::string csv_of(const SweepConfig& c, const std::vector<CellResult>& r) {
  std::ostringstream os;
  write_csv(os, c, r);
  return os.str();
}

}  // namespace

TEST_CASE("classify_cell") {
  CHECK(classify_cell(0, 100'000, 2) == Classification::subcritical_evidence);
  CHECK(classify_cell(3000, 10'000, 2) == Classification::supercritical_evidence);
  CHECK(classify_cell(1, 50, 2) == Classification::undetermined);
  CHECK(classify_cell(0, 99, 2) == Classification::undetermined);
  CHECK(classify_cell(0, 100, 2) == Classification::subcritical_evidence);
  CHECK(classify_cell(0, 0, 2) == Classification::undetermined);
  // p_hat = 1 has zero standard error
  CHECK(classify_cell(10, 10, 3) == Classification::supercritical_evidence);
  // 1/100: se ~ 0.00995, p - 2 se < 0
  CHECK(classify_cell(1, 100, 2) == Classification::undetermined);
  CHECK(classify_cell(1, 100, 0.5) == Classification::supercritical_evidence);
  CHECK_THROWS_AS(classify_cell(5, 4, 2), std::invalid_argument);
  CHECK(to_string(Classification::undetermined) == "undetermined");
}

TEST_CASE("parse_grid") {
  CHECK(parse_grid("0:1:0.25") == std::vector<double>{0, 0.25, 0.5, 0.75, 1.0});
  const auto g = parse_grid("0.1:0.3:0.1");
  REQUIRE(g.size() == 3);
  CHECK(g[2] == doctest::Approx(0.3));
  CHECK(parse_grid(" 1, 2.5 ,4") == std::vector<double>{1, 2.5, 4});
  CHECK(parse_grid("3") == std::vector<double>{3});
  CHECK(parse_grid("0:0.05:0.02").size() == 3);
  CHECK_THROWS_AS(parse_grid(""), ConfigError);
  CHECK_THROWS_AS(parse_grid("1:0:0.1"), ConfigError);
  CHECK_THROWS_AS(parse_grid("0:1:0"), ConfigError);
  CHECK_THROWS_AS(parse_grid("0:1"), ConfigError);
  CHECK_THROWS_AS(parse_grid("1,x"), ConfigError);
  CHECK_THROWS_AS(parse_grid("1,,2"), ConfigError);
}

TEST_CASE("config parsing") {
  SUBCASE("minimal config is completed with defaults") {
    const SweepConfig c = parse_config("lambda_grid=0.1\nkappa_grid=1\n");
    CHECK(c.model == SweepModel::adaptive);
    CHECK(c.beta == 3.0);
    CHECK(c.n == 2000);
    CHECK(c.epsilon == 0.05);
    CHECK(c.samples == 100);
    CHECK(c.z_super == 2.0);
    CHECK(c.event_budget == 100'000'000);
    CHECK(c.seed == 1);
    CHECK_NOTHROW(c.validate());
  }
  SUBCASE("round trip") {
    SweepConfig c;
    c.model = SweepModel::cpef;
    c.beta = 10;
    c.lambda_grid = parse_grid("0.01:0.2:0.01");
    c.kappa_grid = {20, 40, 60};
    c.n = 12345;
    c.epsilon = 0.1 / 3.0;
    c.samples = 777;
    c.z_super = 3;
    c.event_budget = 5000;
    c.cpef_total_infected = 11;
    c.cpef_meta_nodes = 12;
    c.cpef_node_cap = 13;
    c.seed = 0xdeadbeefcafeULL;
    c.out = "results/out.csv";
    c.threads = 3;
    const std::string text = emit_config(c);
    const SweepConfig back = parse_config(text);
    CHECK(back == c);
    CHECK(emit_config(back) == text);
  }
  SUBCASE("comments and blank lines") {
    const SweepConfig c = parse_config("# sweep\n\nmodel = nonadaptive  # trailing\r\nlambda_grid=1,2\n");
    CHECK(c.model == SweepModel::nonadaptive);
    CHECK(c.lambda_grid == std::vector<double>{1, 2});
  }
  SUBCASE("errors carry the location") {
    try {
      parse_config("beta=3\n\nfoo=1\n", "cfg");
      FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
      CHECK(std::string(e.what()) == "cfg:3: unknown key 'foo'");
    }
    try {
      parse_config("samples=abc\n", "cfg");
      FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
      const std::string msg = e.what();
      CHECK(msg.rfind("cfg:1: bad value for 'samples'", 0) == 0);
    }
    CHECK_THROWS_AS(parse_config("just words\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("model=sir\n"), ConfigError);
    CHECK_THROWS_AS(load_config("/nonexistent/dir/cfg"), ConfigError);
  }
  SUBCASE("validation") {
    SweepConfig c = small_config();
    CHECK_NOTHROW(c.validate());
    c.lambda_grid = {2, 1};
    CHECK_THROWS_AS(c.validate(), ConfigError);
    c = small_config();
    c.kappa_grid = {};
    CHECK_THROWS_AS(c.validate(), ConfigError);
    c = small_config();
    c.samples = 0;
    CHECK_THROWS_AS(c.validate(), ConfigError);
    c = small_config();
    c.z_super = 0;
    CHECK_THROWS_AS(c.validate(), ConfigError);
    c = small_config();
    c.epsilon = 0.001;  // epsilon * n < 1
    CHECK_THROWS_AS(c.validate(), ConfigError);
    c.model = SweepModel::cpef;  // no population in the forest model
    CHECK_NOTHROW(c.validate());
    c.cpef_meta_nodes = 0;
    CHECK_THROWS_AS(c.validate(), ConfigError);
  }
  SUBCASE("file loading") {
    const auto path = std::filesystem::temp_directory_path() / "acp_test_sweep.cfg";
    {
      std::ofstream out(path);
      out << "lambda_grid=0.1:0.3:0.1\nkappa_grid=1\nseed=99\n";
    }
    const SweepConfig c = load_config(path.string());
    CHECK(c.seed == 99);
    CHECK(c.lambda_grid.size() == 3);
    std::filesystem::remove(path);
  }
}

TEST_CASE("sweep output") {
  SUBCASE("2x2 smoke grid") {
    const SweepConfig c = small_config();
    const auto cells = run_sweep(c);
    REQUIRE(cells.size() == 4);
    CHECK(cells[0].lambda == 0.5);
    CHECK(cells[0].kappa == 0.5);
    CHECK(cells[1].lambda == 0.5);
    CHECK(cells[1].kappa == 1.0);
    CHECK(cells[2].lambda == 1.5);
    for (const CellResult& r : cells) {
      CHECK(r.samples == 10);
      CHECK(r.epidemics <= r.samples);
      CHECK(r.p_hat >= 0.0);
      CHECK(r.p_hat <= 1.0);
      CHECK(r.std_error == doctest::Approx(std::sqrt(r.p_hat * (1 - r.p_hat) / 10)));
      CHECK(r.classification == classify_cell(r.epidemics, r.samples, c.z_super));
      CHECK(r.mean_ever_infected >= 1.0);
    }
    const auto rows = lines(csv_of(c, cells));
    REQUIRE(rows.size() == 5);
    CHECK(rows[0] == sweep_csv_header);
    CHECK(rows[0] ==
          "model,beta,n,epsilon,lambda,kappa,samples,epidemics,p_hat,stderr,classification,"
          "mean_ever_infected,budget_hits,seed");
    for (std::size_t i = 1; i < rows.size(); ++i) {
      const auto cols = split(rows[i], ',');
      REQUIRE(cols.size() == 14);
      for (const auto& col : cols) CHECK(!col.empty());
      CHECK(cols[0] == "adaptive");
      CHECK(cols[2] == "100");
      CHECK(cols[13] == "7");
    }
  }
  SUBCASE("bit-identical across runs and thread counts") {
    SweepConfig c = small_config();
    c.samples = 70;  // several chunks per cell
    c.threads = 1;
    const std::string one = csv_of(c, run_sweep(c));
    c.threads = 3;
    const std::string three = csv_of(c, run_sweep(c));
    c.threads = 8;
    const std::string eight = csv_of(c, run_sweep(c));
    CHECK(one == three);
    CHECK(one == eight);
    c.seed = 8;
    CHECK(csv_of(c, run_sweep(c)) != one);
  }
  SUBCASE("non-adaptive and forest rows") {
    SweepConfig c = small_config();
    c.model = SweepModel::nonadaptive;
    for (const auto& row : lines(csv_of(c, run_sweep(c)))) CHECK(row.find(",,") == std::string::npos);

    c.model = SweepModel::cpef;
    c.lambda_grid = {0.05, 2.0};
    c.kappa_grid = {1.0};
    c.samples = 20;
    c.cpef_total_infected = 2000;
    c.cpef_meta_nodes = 2000;
    const auto cells = run_sweep(c);
    CHECK(cells[0].budget_hits == cells[0].epidemics);
    CHECK(cells[1].epidemics > 0);
    const auto rows = lines(csv_of(c, cells));
    for (std::size_t i = 1; i < rows.size(); ++i) {
      const auto cols = split(rows[i], ',');
      REQUIRE(cols.size() == 14);
      CHECK(cols[0] == "cpef");
      CHECK(cols[2].empty());
      CHECK(cols[3].empty());
    }
  }
  SUBCASE("unwritable output") {
    const SweepConfig c = small_config();
    CHECK_THROWS_AS(write_csv_file("/nonexistent/dir/out.csv", c, {}), ConfigError);
  }
  CHECK(format_double(0.1) == "0.10000000000000001");
  CHECK(format_double(2) == "2");
}

TEST_CASE("theory CSV agrees with the closed forms") {
  // This is the contract consumed by the plotting overlays.
  std::vector<double> lambdas;
  std::vector<double> kappas;
  for (int i = 0; i < 10; ++i) lambdas.push_back(0.01 + 0.07 * i);
  for (int i = 0; i < 10; ++i) kappas.push_back(0.5 + 1.3 * i);
  std::ostringstream os;
  write_theory_grid(os, 3.0, lambdas, kappas);
  const auto rows = lines(os.str());
  REQUIRE(rows.size() == 101);
  CHECK(rows[0] == theory_csv_header);
  const auto header = split(rows[0], ',');
  REQUIRE(header.size() == 17);
  auto number = [](const std::string& s) { return s.empty() ? NAN : std::stod(s); };
  auto close = [](double a, double b) {
    if (std::isnan(a) || std::isnan(b)) return std::isnan(a) && std::isnan(b);
    return std::abs(a - b) <= 1e-9 * std::max(1.0, std::abs(b));
  };
  auto opt = [](const std::optional<double>& v) { return v ? *v : NAN; };
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto c = split(rows[i], ',');
    REQUIRE(c.size() == 17);
    const double lambda = lambdas[(i - 1) / kappas.size()];
    const double kappa = kappas[(i - 1) % kappas.size()];
    const TheoryReport r = evaluate_conditions(lambda, 3.0, kappa);
    CHECK(number(c[0]) == lambda);
    CHECK(number(c[1]) == 3.0);
    CHECK(number(c[2]) == kappa);
    CHECK(c[3] == (r.thm1a_small_lb ? "true" : "false"));
    CHECK(c[4] == (r.thm1a_large_kappa ? "true" : "false"));
    CHECK(c[5] == (r.thm1b ? "true" : "false"));
    CHECK(c[6] == (r.thm1b_simple ? "true" : "false"));
    CHECK(c[7] == (r.thm2_sub ? "true" : "false"));
    CHECK(c[8] == (r.thm2_super ? "true" : "false"));
    CHECK(close(number(c[9]), sir_offspring_mean(lambda, 3.0, kappa)));
    CHECK(close(number(c[10]), opt(r.meta_lower_bound)));
    CHECK(close(number(c[11]), branching_top_eigenvalue(lambda, 3.0, kappa, 0, 0)));
    CHECK(close(number(c[12]), meanfield_decay(lambda, 3.0, kappa).C));
    CHECK(close(number(c[13]), meanfield_decay(lambda, 3.0, kappa).eps_decay));
    CHECK(close(number(c[14]), opt(r.z_bound)));
    CHECK(close(number(c[15]), opt(r.infection_mean_bound)));
    CHECK(close(number(c[16]), supercritical_radicand(lambda, 3.0, kappa)));
    // the overlay boundary lambda*beta = 0.21 sits at lambda = 0.07
    CHECK((lambda < 0.07) == (c[3] == "true"));
  }
}
