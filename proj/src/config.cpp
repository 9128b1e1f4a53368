#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "acp/sweep.hpp"

namespace acp {

std::string_view to_string(SweepModel m) {
  switch (m) {
    case SweepModel::adaptive: return "adaptive";
    case SweepModel::nonadaptive: return "nonadaptive";
    case SweepModel::cpef: return "cpef";
  }
  return "?";
}

SweepModel parse_sweep_model(std::string_view text) {
  if (text == "cpef") return SweepModel::cpef;
  try {
    return parse_mode(text) == Mode::adaptive ? SweepModel::adaptive : SweepModel::nonadaptive;
  } catch (const std::invalid_argument&) {
    throw ConfigError("unknown model '" + std::string(text) + "'");
  }
}

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double to_double(std::string_view s) {
  s = trim(s);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v))
    throw ConfigError("not a number: '" + std::string(s) + "'");
  return v;
}

std::uint64_t to_u64(std::string_view s) {
  s = trim(s);
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty())
    throw ConfigError("not a non-negative integer: '" + std::string(s) + "'");
  return v;
}

}  // namespace

std::vector<double> parse_grid(std::string_view text) {
  text = trim(text);
  if (text.empty()) throw ConfigError("empty grid");
  std::vector<double> grid;
  if (text.find(':') != std::string_view::npos) {
    std::vector<double> parts;
    std::size_t start = 0;
    for (;;) {
      const auto colon = text.find(':', start);
      parts.push_back(to_double(text.substr(start, colon - start)));
      if (colon == std::string_view::npos) break;
      start = colon + 1;
    }
    if (parts.size() != 3) throw ConfigError("range grid must be a:b:step");
    const double a = parts[0];
    const double b = parts[1];
    const double step = parts[2];
    if (!(step > 0.0)) throw ConfigError("grid step must be positive");
    if (b < a) throw ConfigError("grid end below its start");
    // a + i*step rather than repeated addition; b itself is kept when it is
    // within rounding of a grid point.
    const auto count = static_cast<std::uint64_t>(std::floor((b - a) / step + 1e-9)) + 1;
    if (count > 10'000'000) throw ConfigError("grid too large");
    for (std::uint64_t i = 0; i < count; ++i) grid.push_back(a + static_cast<double>(i) * step);
    return grid;
  }
  std::size_t start = 0;
  for (;;) {
    const auto comma = text.find(',', start);
    grid.push_back(to_double(text.substr(start, comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return grid;
}

void set_config_value(SweepConfig& c, std::string_view key, std::string_view value) {
  value = trim(value);
  if (key == "model") {
    c.model = parse_sweep_model(value);
  } else if (key == "beta") {
    c.beta = to_double(value);
  } else if (key == "lambda_grid") {
    c.lambda_grid = parse_grid(value);
  } else if (key == "kappa_grid") {
    c.kappa_grid = parse_grid(value);
  } else if (key == "n") {
    const auto n = to_u64(value);
    if (n > 0xffffffffu) throw ConfigError("n too large");
    c.n = static_cast<std::uint32_t>(n);
  } else if (key == "epsilon") {
    c.epsilon = to_double(value);
  } else if (key == "samples") {
    c.samples = to_u64(value);
  } else if (key == "z_super") {
    c.z_super = to_double(value);
  } else if (key == "event_budget") {
    c.event_budget = to_u64(value);
  } else if (key == "cpef_total_infected") {
    c.cpef_total_infected = to_u64(value);
  } else if (key == "cpef_meta_nodes") {
    c.cpef_meta_nodes = to_u64(value);
  } else if (key == "cpef_node_cap") {
    c.cpef_node_cap = to_u64(value);
  } else if (key == "seed") {
    c.seed = to_u64(value);
  } else if (key == "out") {
    c.out = std::string(value);
  } else if (key == "threads") {
    c.threads = static_cast<unsigned>(to_u64(value));
  } else {
    throw ConfigError("unknown key '" + std::string(key) + "'");
  }
}

void SweepConfig::validate() const {
  auto check_grid = [](const std::vector<double>& g, const char* name) {
    if (g.empty()) throw ConfigError(std::string(name) + " is empty");
    for (std::size_t i = 0; i < g.size(); ++i) {
      if (!(g[i] >= 0.0)) throw ConfigError(std::string(name) + " has a negative entry");
      if (i > 0 && !(g[i] > g[i - 1]))
        throw ConfigError(std::string(name) + " must be strictly increasing");
    }
  };
  check_grid(lambda_grid, "lambda_grid");
  check_grid(kappa_grid, "kappa_grid");
  if (!(beta >= 0.0)) throw ConfigError("beta must be non-negative");
  if (samples < 1) throw ConfigError("samples must be at least 1");
  if (!(z_super > 0.0)) throw ConfigError("z_super must be positive");
  if (model == SweepModel::cpef) {
    if (cpef_total_infected == 0 || cpef_meta_nodes == 0 || cpef_node_cap == 0)
      throw ConfigError("cpef budgets must be positive");
  } else {
    Params p;
    p.n = n;
    p.beta = beta;
    p.epsilon = epsilon;
    try {
      p.validate();
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what());
    }
    if (event_budget == 0) throw ConfigError("event_budget must be positive");
  }
}

SweepConfig parse_config(std::string_view text, std::string_view origin) {
  SweepConfig c;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? text.size() - pos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto where = std::string(origin) + ":" + std::to_string(line_no) + ": ";
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ConfigError(where + "expected key=value");
    const auto key = trim(line.substr(0, eq));
    try {
      set_config_value(c, key, line.substr(eq + 1));
    } catch (const ConfigError& e) {
      const std::string msg = e.what();
      if (msg.rfind("unknown key", 0) == 0) throw ConfigError(where + msg);
      throw ConfigError(where + "bad value for '" + std::string(key) + "': " + msg);
    }
  }
  return c;
}

SweepConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), path);
}

std::string emit_config(const SweepConfig& c) {
  auto grid = [](const std::vector<double>& g) {
    std::string s;
    for (std::size_t i = 0; i < g.size(); ++i) {
      if (i) s += ',';
      s += format_double(g[i]);
    }
    return s;
  };
  std::ostringstream os;
  os << "model=" << to_string(c.model) << '\n'
     << "beta=" << format_double(c.beta) << '\n'
     << "lambda_grid=" << grid(c.lambda_grid) << '\n'
     << "kappa_grid=" << grid(c.kappa_grid) << '\n'
     << "n=" << c.n << '\n'
     << "epsilon=" << format_double(c.epsilon) << '\n'
     << "samples=" << c.samples << '\n'
     << "z_super=" << format_double(c.z_super) << '\n'
     << "event_budget=" << c.event_budget << '\n'
     << "cpef_total_infected=" << c.cpef_total_infected << '\n'
     << "cpef_meta_nodes=" << c.cpef_meta_nodes << '\n'
     << "cpef_node_cap=" << c.cpef_node_cap << '\n'
     << "seed=" << c.seed << '\n'
     << "threads=" << c.threads << '\n';
  if (!c.out.empty()) os << "out=" << c.out << '\n';
  return os.str();
}

}  // namespace acp
