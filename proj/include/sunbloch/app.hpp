#pragma once

// Subcommands behind the command-line front end. Each returns a process
// exit code:
//   0 success, 1 failed checks (validate), 2 configuration or model error,
//   3 numerical failure, 4 tensor cache error.

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <vector>

#include "sunbloch/config.hpp"
#include "sunbloch/sparse_tensor.hpp"
#include "sunbloch/structure_constants.hpp"

namespace sunbloch {

inline constexpr int kExitOk = 0;
inline constexpr int kExitChecksFailed = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNumeric = 3;
inline constexpr int kExitCache = 4;

inline constexpr std::size_t kValidateMaxN = 16;

/// Tensor access for dimension n: cached files if present in cache.dir,
/// generated on the fly when requested or when materialising would exceed
/// cache.materialize_limit_bytes, materialised otherwise.
TensorSource resolve_tensors(const RunConfig& config, std::size_t n, std::ostream& log);

/// Final diagonal probabilities for each grid value of the scan parameter.
struct ScanPoint {
  double value = 0.0;
  std::vector<double> probabilities;
};
std::vector<double> scan_grid(const ScanSection& scan);
std::vector<ScanPoint> run_scan(const RunConfig& config, std::ostream& log);

int cmd_propagate(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_scan(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_validate(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_bench(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_cache(std::size_t n, const std::vector<TensorTag>& kinds, const std::filesystem::path& dir, std::ostream& out,
              std::ostream& err);

}  // namespace sunbloch
