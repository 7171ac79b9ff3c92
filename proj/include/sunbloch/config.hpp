#pragma once

// Run configuration: flat `section.key = value` lines, '#' comments.
// The full key list with defaults is in README.md.

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "sunbloch/bloch_compile.hpp"
#include "sunbloch/models.hpp"

namespace sunbloch {

struct ModelSection {
  std::string type = "dimer";  // dimer | file
  std::filesystem::path path;  // model file for type = file
  DimerParams dimer;
  InitialState initial;
};

struct IntegrationSection {
  std::size_t steps_per_period = 1000;
  double periods = 10.0;
  std::size_t stride = 1;
};

struct ScanSection {
  std::string parameter = "U";
  double min = 0.0;
  double max = 3.0;
  std::size_t count = 61;
};

struct OutputSection {
  std::filesystem::path dir = ".";
  std::string trajectory = "trajectory.csv";
  std::string final_state = "final_state.csv";
  std::string scan = "scan.csv";
  std::string bench = "bench.csv";
  std::string bench_exponents = "bench_exponents.csv";
};

struct CacheSection {
  std::filesystem::path dir;  // empty: no cache
  bool on_the_fly = false;
  /// Tensors larger than this are generated on the fly instead.
  std::size_t materialize_limit_bytes = std::size_t{1} << 30;
};

struct BenchSection {
  std::vector<std::size_t> sizes{100, 141, 200, 283, 400};
  std::size_t measure_steps = 20;
};

struct RunConfig {
  ModelSection model;
  IntegrationSection integration;
  ScanSection scan;
  OutputSection output;
  CacheSection cache;
  BenchSection bench;
  CompileOptions compile;
  std::size_t threads = 1;
};

/// Throws ConfigError with line numbers for malformed input and names the
/// offending key for unknown keys or bad values.
RunConfig parse_config(const std::string& text, const std::string& origin = "<config>");
RunConfig load_config(const std::filesystem::path& path);

/// Builds the model described by the config. Validation failures become
/// ValidationError.
ModelSpec build_model(const RunConfig& config);

}  // namespace sunbloch
