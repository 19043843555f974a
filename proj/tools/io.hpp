#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace qedcli {

enum ExitCode : int { kOk = 0, kUsage = 2, kFailure = 3, kInternal = 4 };

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::filesystem::path& path);

// Writes to a temporary sibling, then renames it over `path`.
void write_atomic(const std::filesystem::path& path, const std::string& content);

struct Manifest {
  std::string command;
  std::map<std::string, std::string> config;
  std::map<std::string, std::uint64_t> seeds;
  std::vector<std::string> outputs;
  double wall_time = 0.0;
};

// <output>.manifest.json next to the primary output.
std::filesystem::path manifest_path(const std::filesystem::path& output);
void write_manifest(const std::filesystem::path& output, const Manifest& m);

// Worker count from QED_THREADS, else the hardware concurrency (at least 1).
int thread_count();

struct Series {
  std::string name;
  std::vector<std::pair<double, double>> points;
};

// Static scatter plot with one colour per series.
std::string svg_plot(const std::vector<Series>& series, const std::string& title, const std::string& xlabel,
                     const std::string& ylabel);

}  // namespace qedcli
