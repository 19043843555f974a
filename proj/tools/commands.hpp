#pragma once

#include <cstdint>
#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

namespace qedcli {

namespace fs = std::filesystem;

struct GenOptions {
  int n = 0;
  std::uint64_t seed = 0;
  fs::path out;
};

struct SampleOptions {
  fs::path tree;
  std::string model = "rcn";
  std::int64_t m = 0;
  double lambda = 0.0;
  double eta = 0.0;
  std::uint64_t seed = 0;
  fs::path out;
};

struct ReconstructOptions {
  fs::path quartets;
  fs::path config;  // optional
  std::vector<std::string> overrides;
  fs::path out;          // result JSON
  fs::path newick;       // optional
  fs::path diagnostics;  // optional JSON lines
};

struct DistOptions {
  bool sampled = false;
  std::int64_t samples = 100000;
  std::uint64_t seed = 0;
  fs::path first, second;
  fs::path out;  // stdout when empty
};

struct BenchOptions {
  fs::path config;
  std::vector<std::string> overrides;
  fs::path out_dir;
};

struct OracleOptions {
  int n = 0;
  double p = 1.0;
  double delta_conf = 0.05;
  std::int64_t budget = 0;  // 0 = unlimited
  std::uint64_t seed = 0;
};

struct CheckOptions {
  fs::path tree;
  fs::path quartets;  // optional
};

// Each returns a process exit code and reports to `log`.
int cmd_gen(const GenOptions& o, std::ostream& log);
int cmd_sample(const SampleOptions& o, std::ostream& log);
int cmd_reconstruct(const ReconstructOptions& o, std::ostream& log);
int cmd_dist(const DistOptions& o, std::ostream& out);
int cmd_bench(const BenchOptions& o, std::ostream& log);
int cmd_oracle(const OracleOptions& o, std::ostream& out);
int cmd_check(const CheckOptions& o, std::ostream& out);

}  // namespace qedcli
