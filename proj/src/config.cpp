#include "sunbloch/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <sstream>

#include "sunbloch/error.hpp"

namespace sunbloch {
namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& v) {
  double x = 0.0;
  const auto* end = v.data() + v.size();
  const auto [ptr, ec] = std::from_chars(v.data(), end, x);
  if (ec != std::errc{} || ptr != end || !std::isfinite(x)) throw ConfigError(key + ": expected a number, got '" + v + "'");
  return x;
}

std::size_t to_size(const std::string& key, const std::string& v) {
  std::size_t x = 0;
  const auto* end = v.data() + v.size();
  const auto [ptr, ec] = std::from_chars(v.data(), end, x);
  if (ec != std::errc{} || ptr != end) throw ConfigError(key + ": expected a non-negative integer, got '" + v + "'");
  return x;
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ConfigError(key + ": expected true or false, got '" + v + "'");
}

AssemblyStrategy to_strategy(const std::string& key, const std::string& v) {
  if (v == "auto") return AssemblyStrategy::kAuto;
  if (v == "global") return AssemblyStrategy::kGlobalSort;
  if (v == "blocked") return AssemblyStrategy::kRowBlocked;
  throw ConfigError(key + ": expected auto, global or blocked, got '" + v + "'");
}

void check_positive(const std::string& key, double v) {
  if (!(v > 0.0)) throw ConfigError(key + ": must be positive");
}

}  // namespace

RunConfig parse_config(const std::string& text, const std::string& origin) {
  RunConfig c;
  std::string initial_text = "basis:0";
  auto& d = c.model.dimer;

  using Setter = std::function<void(const std::string&, const std::string&)>;
  const std::map<std::string, Setter> setters{
      {"model.type",
       [&](auto& k, auto& v) {
         if (v != "dimer" && v != "file") throw ConfigError(k + ": expected dimer or file, got '" + v + "'");
         c.model.type = v;
       }},
      {"model.path", [&](auto&, auto& v) { c.model.path = v; }},
      {"model.N", [&](auto& k, auto& v) { d.n = to_size(k, v); }},
      {"model.J", [&](auto& k, auto& v) { d.J = to_double(k, v); }},
      {"model.U", [&](auto& k, auto& v) { d.U = to_double(k, v); }},
      {"model.E", [&](auto& k, auto& v) { d.E = to_double(k, v); }},
      {"model.A", [&](auto& k, auto& v) { d.A = to_double(k, v); }},
      {"model.T", [&](auto& k, auto& v) { d.T = to_double(k, v); check_positive(k, d.T); }},
      {"model.gamma",
       [&](auto& k, auto& v) {
         d.gamma = to_double(k, v);
         if (d.gamma < 0.0) throw ConfigError(k + ": must be non-negative");
       }},
      {"model.drive",
       [&](auto& k, auto& v) {
         try {
           d.drive = parse_drive_kind(v);
         } catch (const ConfigError& e) {
           throw ConfigError(k + ": " + e.what());
         }
       }},
      {"model.gamma_convention",
       [&](auto& k, auto& v) {
         try {
           d.convention = parse_gamma_convention(v);
         } catch (const ConfigError& e) {
           throw ConfigError(k + ": " + e.what());
         }
       }},
      {"model.initial", [&](auto&, auto& v) { initial_text = v; }},
      {"integration.steps_per_period",
       [&](auto& k, auto& v) {
         c.integration.steps_per_period = to_size(k, v);
         if (c.integration.steps_per_period == 0 || c.integration.steps_per_period % 2 != 0) {
           throw ConfigError(k + ": must be a positive even number so the drive switch falls on a step");
         }
       }},
      {"integration.periods",
       [&](auto& k, auto& v) {
         c.integration.periods = to_double(k, v);
         if (c.integration.periods < 0.0) throw ConfigError(k + ": must be non-negative");
       }},
      {"integration.stride",
       [&](auto& k, auto& v) {
         c.integration.stride = to_size(k, v);
         if (c.integration.stride == 0) throw ConfigError(k + ": must be positive");
       }},
      {"scan.parameter",
       [&](auto& k, auto& v) {
         if (v != "U" && v != "J" && v != "E" && v != "A" && v != "gamma") {
           throw ConfigError(k + ": expected one of U, J, E, A, gamma, got '" + v + "'");
         }
         c.scan.parameter = v;
       }},
      {"scan.min", [&](auto& k, auto& v) { c.scan.min = to_double(k, v); }},
      {"scan.max", [&](auto& k, auto& v) { c.scan.max = to_double(k, v); }},
      {"scan.count",
       [&](auto& k, auto& v) {
         c.scan.count = to_size(k, v);
         if (c.scan.count == 0) throw ConfigError(k + ": must be positive");
       }},
      {"output.dir", [&](auto&, auto& v) { c.output.dir = v; }},
      {"output.trajectory", [&](auto&, auto& v) { c.output.trajectory = v; }},
      {"output.final_state", [&](auto&, auto& v) { c.output.final_state = v; }},
      {"output.scan", [&](auto&, auto& v) { c.output.scan = v; }},
      {"output.bench", [&](auto&, auto& v) { c.output.bench = v; }},
      {"output.bench_exponents", [&](auto&, auto& v) { c.output.bench_exponents = v; }},
      {"cache.dir", [&](auto&, auto& v) { c.cache.dir = v; }},
      {"cache.on_the_fly", [&](auto& k, auto& v) { c.cache.on_the_fly = to_bool(k, v); }},
      {"cache.materialize_limit_mb",
       [&](auto& k, auto& v) { c.cache.materialize_limit_bytes = to_size(k, v) << 20; }},
      {"bench.sizes",
       [&](auto& k, auto& v) {
         c.bench.sizes.clear();
         std::istringstream in(v);
         std::string item;
         while (std::getline(in, item, ',')) {
           const auto n = to_size(k, trim(item));
           if (n < 2) throw ConfigError(k + ": sizes must be at least 2");
           c.bench.sizes.push_back(n);
         }
         if (c.bench.sizes.empty()) throw ConfigError(k + ": empty list");
       }},
      {"bench.measure_steps",
       [&](auto& k, auto& v) {
         c.bench.measure_steps = to_size(k, v);
         if (c.bench.measure_steps == 0) throw ConfigError(k + ": must be positive");
       }},
      {"compile.strategy", [&](auto& k, auto& v) { c.compile.strategy = to_strategy(k, v); }},
      {"compile.rate_scales_drift", [&](auto& k, auto& v) { c.compile.rate_scales_drift = to_bool(k, v); }},
      {"compile.memory_budget_mb",
       [&](auto& k, auto& v) { c.compile.memory_budget_bytes = to_size(k, v) << 20; }},
      {"run.threads",
       [&](auto& k, auto& v) {
         c.threads = to_size(k, v);
         if (c.threads == 0) throw ConfigError(k + ": must be positive");
       }},
  };

  std::istringstream in(text);
  std::string raw;
  std::size_t line_no = 0;
  std::map<std::string, std::size_t> seen;
  while (std::getline(in, raw)) {
    ++line_no;
    const auto hash = raw.find('#');
    const auto line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (line.empty()) continue;
    const auto where = origin + ":" + std::to_string(line_no) + ": ";
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError(where + "expected 'section.key = value'");
    const auto key = trim(line.substr(0, eq));
    const auto value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty()) throw ConfigError(where + "expected 'section.key = value'");
    const auto it = setters.find(key);
    if (it == setters.end()) throw ConfigError(where + "unknown key '" + key + "'");
    if (seen.count(key)) throw ConfigError(where + "duplicate key '" + key + "'");
    seen[key] = line_no;
    try {
      it->second(key, value);
    } catch (const ConfigError& e) {
      throw ConfigError(where + e.what());
    }
  }

  if (c.model.type == "file" && c.model.path.empty()) throw ConfigError(origin + ": model.type = file needs model.path");
  if (d.n < 2) throw ConfigError(origin + ": model.N must be at least 2");
  if (!(c.scan.max >= c.scan.min)) throw ConfigError(origin + ": scan.max must not be below scan.min");
  if (c.model.type == "file" && seen.count("model.initial")) {
    throw ConfigError(origin + ":" + std::to_string(seen["model.initial"]) +
                      ": model.initial belongs in the model file for model.type = file");
  }
  try {
    if (c.model.type == "dimer") c.model.initial = parse_initial_state(initial_text, d.n);
  } catch (const ConfigError& e) {
    throw ConfigError(origin + ": model." + e.what());
  }
  return c;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  auto config = parse_config(text.str(), path.string());
  if (config.model.type == "file" && config.model.path.is_relative()) {
    config.model.path = path.parent_path() / config.model.path;
  }
  return config;
}

ModelSpec build_model(const RunConfig& config) {
  if (config.model.type == "file") return load_model(config.model.path);
  auto model = dimer_model(config.model.dimer);
  model.initial = config.model.initial;
  validate_model(model);
  return model;
}

}  // namespace sunbloch
