#pragma once

#include <cstdint>
#include <filesystem>
#include <istream>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "qed/verification.hpp"

namespace qedcli {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Flat key -> value map. "[sdp]" followed by "tol_feas = 1e-6" yields the key "sdp.tol_feas".
using KeyValues = std::map<std::string, std::string>;

KeyValues parse_config(std::istream& in);
KeyValues read_config_file(const std::filesystem::path& path);
// "key=value"
void apply_override(KeyValues& kv, const std::string& assignment);

// eta, eps, delta, the root seed and the solver knobs live in `pipeline`.
struct ExperimentConfig {
  int n = 0;
  std::int64_t m = 0;
  double lambda = 0.0;
  bool wall_time = false;
  qed::PipelineConfig pipeline;
};

// Rejects unknown keys and out-of-range values before any work starts.
ExperimentConfig to_experiment(const KeyValues& kv);

// Every recognised key with a one-line description.
const std::vector<std::pair<std::string, std::string>>& config_schema();

// Sorted "key=value" lines; the config hash is taken over this text.
std::string canonical_text(const KeyValues& kv);
std::uint64_t config_hash(const KeyValues& kv);

std::vector<double> parse_list(const std::string& text);

}  // namespace qedcli
