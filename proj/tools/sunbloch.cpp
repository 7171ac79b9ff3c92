#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "sunbloch/app.hpp"
#include "sunbloch/error.hpp"

namespace {

std::vector<sunbloch::TensorTag> parse_kinds(const std::string& text) {
  std::vector<sunbloch::TensorTag> kinds;
  std::istringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (item == "f") kinds.push_back(sunbloch::TensorTag::kF);
    else if (item == "d") kinds.push_back(sunbloch::TensorTag::kD);
    else if (item == "z") kinds.push_back(sunbloch::TensorTag::kZ);
    else throw sunbloch::ConfigError("--kinds: expected a comma list of f, d, z, got '" + item + "'");
  }
  if (kinds.empty()) throw sunbloch::ConfigError("--kinds: empty list");
  return kinds;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Coherence-vector propagation of finite-dimensional Lindblad master equations"};
  app.require_subcommand(1);

  std::string config_path;
  std::size_t threads = 0;
  std::string cache_dir;
  bool on_the_fly = false;
  app.add_option("-c,--config", config_path, "Run configuration file");
  app.add_option("--threads", threads, "Worker threads (overrides run.threads)");
  app.add_option("--cache-dir", cache_dir, "Tensor cache directory (overrides cache.dir)");
  app.add_flag("--on-the-fly", on_the_fly, "Generate structure constants on demand");

  auto* propagate = app.add_subcommand("propagate", "Integrate one model and write the trajectory");
  auto* scan = app.add_subcommand("scan", "Sweep one dimer parameter and record final populations");
  auto* validate = app.add_subcommand("validate", "Compare against dense reference computations (N <= 16)");
  auto* bench = app.add_subcommand("bench", "Time and measure each pipeline stage over bench.sizes");
  auto* cache = app.add_subcommand("cache", "Write structure-constant cache files");
  std::size_t cache_n = 0;
  std::string kinds = "f,z";
  cache->add_option("-N,--N", cache_n, "Dimension")->required();
  cache->add_option("--kinds", kinds, "Comma list of tensors to write (f, d, z)");

  CLI11_PARSE(app, argc, argv);

  try {
    sunbloch::RunConfig config;
    if (!config_path.empty()) config = sunbloch::load_config(config_path);
    if (threads > 0) config.threads = threads;
    if (!cache_dir.empty()) config.cache.dir = cache_dir;
    if (on_the_fly) config.cache.on_the_fly = true;

    if (*propagate) return sunbloch::cmd_propagate(config, std::cout, std::cerr);
    if (*scan) return sunbloch::cmd_scan(config, std::cout, std::cerr);
    if (*validate) return sunbloch::cmd_validate(config, std::cout, std::cerr);
    if (*bench) return sunbloch::cmd_bench(config, std::cout, std::cerr);
    if (*cache) return sunbloch::cmd_cache(cache_n, parse_kinds(kinds), config.cache.dir, std::cout, std::cerr);
  } catch (const sunbloch::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return sunbloch::kExitConfig;
  } catch (const sunbloch::ValidationError& e) {
    std::cerr << "model error: " << e.what() << "\n";
    return sunbloch::kExitConfig;
  }
  return sunbloch::kExitOk;
}
