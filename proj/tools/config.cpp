#include "config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "qed/rng.hpp"

namespace qedcli {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string unquote(std::string v) {
  if (v.size() >= 2 && (v.front() == '"' || v.front() == '\'') && v.back() == v.front()) return v.substr(1, v.size() - 2);
  return v;
}

// Drops a trailing comment that is not inside quotes.
std::string strip_comment(const std::string& line) {
  char quote = 0;
  for (size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quote) {
      if (c == quote) quote = 0;
    } else if (c == '"' || c == '\'') {
      quote = c;
    } else if (c == '#') {
      return line.substr(0, i);
    }
  }
  return line;
}

double to_double(const KeyValues& kv, const std::string& key) {
  const std::string& v = kv.at(key);
  try {
    size_t used = 0;
    const double x = std::stod(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw ConfigError("config: " + key + " = '" + v + "' is not a number");
  }
}

std::int64_t to_int(const KeyValues& kv, const std::string& key) {
  const std::string& v = kv.at(key);
  std::int64_t x = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
  if (ec != std::errc() || ptr != v.data() + v.size()) throw ConfigError("config: " + key + " = '" + v + "' is not an integer");
  return x;
}

bool to_bool(const KeyValues& kv, const std::string& key) {
  const std::string& v = kv.at(key);
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  throw ConfigError("config: " + key + " = '" + v + "' is not a boolean");
}

}  // namespace

KeyValues parse_config(std::istream& in) {
  KeyValues kv;
  std::string line, section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    line = trim(strip_comment(line));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError("config line " + std::to_string(lineno) + ": unterminated section header");
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    if (key.empty()) throw ConfigError("config line " + std::to_string(lineno) + ": empty key");
    kv[section.empty() ? key : section + "." + key] = unquote(trim(line.substr(eq + 1)));
  }
  return kv;
}

KeyValues read_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path.string());
  return parse_config(in);
}

void apply_override(KeyValues& kv, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) throw ConfigError("override '" + assignment + "' is not key=value");
  kv[trim(assignment.substr(0, eq))] = unquote(trim(assignment.substr(eq + 1)));
}

const std::vector<std::pair<std::string, std::string>>& config_schema() {
  static const std::vector<std::pair<std::string, std::string>> schema = {
      {"n", "leaf count (gen, sample)"},
      {"m", "RCN sample size"},
      {"lambda", "Poisson rate per 4-set"},
      {"eta", "noise rate in [0, 2/3)"},
      {"eps", "target quartet distance"},
      {"delta", "cluster scale; clusters hold delta*n to 2*delta*n leaves"},
      {"c_prime", "quartet rate scale c' (0 derives it from the sample)"},
      {"err", "slack in the edge-rate bounds"},
      {"repetitions", "outer repetitions of clustering + reconstruction"},
      {"seed", "root seed"},
      {"skeleton_budget", "skeletons tried per clustering"},
      {"fresh_coins", "redraw the graph's edge coins every repetition"},
      {"margin", "a side stops once its clusters hold more than rho - margin*delta*n leaves"},
      {"delta_hat_max", "largest delta_hat, as a multiple of delta"},
      {"weighting", "presence | multiplicity"},
      {"finite_size", "finite-n edge-rate scale"},
      {"sdp.rank", "cap on the factor rank (0 = no cap)"},
      {"sdp.tol_feas", "ADMM residual tolerance"},
      {"sdp.tol_obj", "tolerated objective loss of the feasibility polish, relative to |A|_1"},
      {"sdp.max_iters", "ADMM iteration cap"},
      {"sdp.penalty_schedule", "geometric:<init>:<growth>"},
      {"report.wall_time", "include wall_time in the result JSON"},
      {"bench.n", "comma-separated leaf counts"},
      {"bench.m_per_n", "comma-separated values of m/n"},
      {"bench.eta", "comma-separated noise rates"},
      {"bench.seeds", "seeds per cell"},
  };
  return schema;
}

ExperimentConfig to_experiment(const KeyValues& kv) {
  for (const auto& [key, value] : kv) {
    bool known = false;
    for (const auto& entry : config_schema()) known = known || entry.first == key;
    if (!known) throw ConfigError("config: unknown key '" + key + "'");
  }
  ExperimentConfig c;
  auto& p = c.pipeline;
  auto has = [&](const char* k) { return kv.count(k) > 0; };
  if (has("n")) c.n = static_cast<int>(to_int(kv, "n"));
  if (has("m")) c.m = to_int(kv, "m");
  if (has("lambda")) c.lambda = to_double(kv, "lambda");
  if (has("eta")) p.eta = to_double(kv, "eta");
  if (has("eps")) p.eps = to_double(kv, "eps");
  if (has("delta")) p.delta = to_double(kv, "delta");
  if (has("c_prime")) p.cluster.model.c_prime = to_double(kv, "c_prime");
  if (has("err")) p.cluster.model.err = to_double(kv, "err");
  if (has("repetitions")) p.repetitions = static_cast<int>(to_int(kv, "repetitions"));
  if (has("seed")) p.seed = static_cast<std::uint64_t>(to_int(kv, "seed"));
  if (has("skeleton_budget")) p.skeleton_budget = static_cast<int>(to_int(kv, "skeleton_budget"));
  if (has("fresh_coins")) p.fresh_coins = to_bool(kv, "fresh_coins");
  if (has("margin")) p.cluster.margin = to_double(kv, "margin");
  if (has("delta_hat_max")) p.cluster.delta_hat_max = to_double(kv, "delta_hat_max");
  if (has("weighting")) {
    const std::string& w = kv.at("weighting");
    if (w == "presence") p.cluster.model.weighting = qed::EdgeWeighting::Presence;
    else if (w == "multiplicity") p.cluster.model.weighting = qed::EdgeWeighting::Multiplicity;
    else throw ConfigError("config: weighting must be presence or multiplicity");
  }
  if (has("finite_size")) p.cluster.model.finite_size = to_bool(kv, "finite_size");
  auto& s = p.cluster.sdp;
  if (has("sdp.rank")) s.rank = static_cast<int>(to_int(kv, "sdp.rank"));
  if (has("sdp.tol_feas")) s.tol_feas = to_double(kv, "sdp.tol_feas");
  if (has("sdp.tol_obj")) s.tol_obj = to_double(kv, "sdp.tol_obj");
  if (has("sdp.max_iters")) s.max_iters = static_cast<int>(to_int(kv, "sdp.max_iters"));
  if (has("sdp.penalty_schedule")) {
    try {
      qed::parse_penalty_schedule(kv.at("sdp.penalty_schedule"), s);
    } catch (const std::exception& e) {
      throw ConfigError(std::string("config: ") + e.what());
    }
  }
  if (has("report.wall_time")) c.wall_time = to_bool(kv, "report.wall_time");

  if (c.n != 0 && c.n < 4) throw ConfigError("config: n must be at least 4");
  if (c.m < 0) throw ConfigError("config: m must be non-negative");
  if (c.lambda < 0) throw ConfigError("config: lambda must be non-negative");
  if (!(p.eta >= 0 && p.eta < 2.0 / 3.0)) throw ConfigError("config: eta must lie in [0, 2/3)");
  if (!(p.eps > 0 && p.eps <= 1)) throw ConfigError("config: eps must lie in (0, 1]");
  if (!(p.delta > 0 && p.delta < 1)) throw ConfigError("config: delta must lie in (0, 1)");
  if (c.n != 0 && p.delta * c.n < 1) throw ConfigError("config: delta * n must be at least 1");
  if (p.repetitions < 0) throw ConfigError("config: repetitions must be non-negative");
  if (p.skeleton_budget <= 0) throw ConfigError("config: skeleton_budget must be positive");
  if (!(p.cluster.delta_hat_max >= 1)) throw ConfigError("config: delta_hat_max must be at least 1");
  if (s.rank < 0 || s.max_iters <= 0 || !(s.tol_feas > 0) || !(s.tol_obj > 0))
    throw ConfigError("config: sdp settings out of range");
  return c;
}

std::string canonical_text(const KeyValues& kv) {
  std::string out;
  for (const auto& [k, v] : kv) out += k + "=" + v + "\n";
  return out;
}

std::uint64_t config_hash(const KeyValues& kv) { return qed::derive_seed(0, canonical_text(kv)); }

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) continue;
    try {
      size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw ConfigError("config: '" + item + "' in list '" + text + "' is not a number");
    }
  }
  if (out.empty()) throw ConfigError("config: empty list");
  return out;
}

}  // namespace qedcli
