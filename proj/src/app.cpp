#include "sunbloch/app.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <iomanip>
#include <memory>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

#include "sunbloch/bloch_compile.hpp"
#include "sunbloch/error.hpp"
#include "sunbloch/memory_tracker.hpp"
#include "sunbloch/oracle.hpp"
#include "sunbloch/propagate.hpp"
#include "sunbloch/tensor_cache.hpp"

namespace sunbloch {
namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

// %.17g keeps every double round-trip exact.
std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

class CsvFile {
 public:
  explicit CsvFile(const std::filesystem::path& path) : path_(path) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    file_ = std::fopen(path.c_str(), "wb");
    if (!file_) throw ConfigError("cannot open output file " + path.string());
  }
  CsvFile(const CsvFile&) = delete;
  CsvFile& operator=(const CsvFile&) = delete;
  ~CsvFile() {
    if (file_) std::fclose(file_);
  }

  void line(const std::string& text) {
    std::fputs(text.c_str(), file_);
    std::fputc('\n', file_);
  }
  void close() {
    const bool bad = std::ferror(file_) != 0;
    const bool failed = std::fclose(file_) != 0;
    file_ = nullptr;
    if (bad || failed) throw ConfigError("write failed for " + path_.string());
  }

 private:
  std::filesystem::path path_;
  std::FILE* file_ = nullptr;
};

template <typename Fn>
int guarded(std::ostream& err, Fn&& fn) {
  try {
    return fn();
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const ValidationError& e) {
    err << "model error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const SizeGuardError& e) {
    err << "size guard: " << e.what() << "\n";
    return kExitConfig;
  } catch (const DimensionError& e) {
    err << "dimension error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const NumericError& e) {
    err << "numerical error: " << e.what() << "\n";
    return kExitNumeric;
  } catch (const CacheError& e) {
    err << "cache error: " << e.what() << "\n";
    return kExitCache;
  }
}

void set_parameter(RunConfig& config, const std::string& name, double value) {
  auto& d = config.model.dimer;
  if (name == "U") d.U = value;
  else if (name == "J") d.J = value;
  else if (name == "E") d.E = value;
  else if (name == "A") d.A = value;
  else if (name == "gamma") d.gamma = value;
  else throw ConfigError("scan.parameter: unsupported parameter '" + name + "'");
}

double step_size(const ModelSpec& model, const RunConfig& config) {
  return model.drive.period / static_cast<double>(config.integration.steps_per_period);
}

std::vector<double> final_probabilities(const RunConfig& config, const TensorSource& tensors) {
  const auto model = build_model(config);
  const auto sys = compile(model, tensors, config.compile);
  const auto v0 = initial_coherence(tensors.basis(), model.initial.density(model.n));
  const double dt = step_size(model, config);
  const auto res = propagate(sys, model.drive, v0, config.integration.periods * model.drive.period, dt);
  return observables(tensors.basis(), res.v);
}

void write_final_state(const std::filesystem::path& path, const Eigen::MatrixXcd& rho) {
  CsvFile csv(path);
  csv.line("i,j,re,im");
  for (Eigen::Index i = 0; i < rho.rows(); ++i) {
    for (Eigen::Index j = 0; j < rho.cols(); ++j) {
      csv.line(std::to_string(i) + "," + std::to_string(j) + "," + num(rho(i, j).real()) + "," + num(rho(i, j).imag()));
    }
  }
  csv.close();
}

std::size_t model_dimension(const RunConfig& config) {
  if (config.model.type == "file") return load_model(config.model.path).n;
  return config.model.dimer.n;
}

}  // namespace

TensorSource resolve_tensors(const RunConfig& config, std::size_t n, std::ostream& log) {
  if (config.cache.on_the_fly) return TensorSource::on_the_fly(n);
  if (!config.cache.dir.empty()) {
    const auto fp = cache_file_path(config.cache.dir, n, TensorTag::kF);
    const auto zp = cache_file_path(config.cache.dir, n, TensorTag::kZ);
    if (std::filesystem::exists(fp) && std::filesystem::exists(zp)) {
      return TensorSource::from_tensors(cache_load_real(n, TensorTag::kF, fp), cache_load_complex(n, zp));
    }
  }
  const std::size_t bytes = 2 * (nz_f_count(n) + nz_d_count(n)) * sizeof(TensorEntry<double>) +
                            (nz_f_count(n) + nz_d_count(n)) * sizeof(TensorEntry<Complex>);
  if (bytes > config.cache.materialize_limit_bytes) {
    log << "note: tensors for N=" << n << " need about " << (bytes >> 20)
        << " MiB, generating them on the fly instead\n";
    return TensorSource::on_the_fly(n);
  }
  return TensorSource::materialize(n);
}

std::vector<double> scan_grid(const ScanSection& scan) {
  std::vector<double> grid(scan.count);
  for (std::size_t i = 0; i < scan.count; ++i) {
    grid[i] = scan.count == 1 ? scan.min
                              : scan.min + (scan.max - scan.min) * static_cast<double>(i) /
                                               static_cast<double>(scan.count - 1);
  }
  return grid;
}

std::vector<ScanPoint> run_scan(const RunConfig& config, std::ostream& log) {
  if (config.model.type != "dimer") throw ConfigError("scan requires model.type = dimer");
  const auto grid = scan_grid(config.scan);
  const auto tensors = resolve_tensors(config, config.model.dimer.n, log);
  std::vector<ScanPoint> points(grid.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_lock;
  auto worker = [&] {
    for (;;) {
      const auto i = next.fetch_add(1);
      if (i >= grid.size()) return;
      try {
        RunConfig local = config;
        set_parameter(local, config.scan.parameter, grid[i]);
        points[i] = {grid[i], final_probabilities(local, tensors)};
      } catch (...) {
        std::lock_guard lock(failure_lock);
        if (!failure) failure = std::current_exception();
        next = grid.size();
      }
    }
  };
  const auto workers = std::max<std::size_t>(1, std::min(config.threads, grid.size()));
  std::vector<std::thread> pool;
  for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
  return points;
}

int cmd_propagate(const RunConfig& config, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const auto model = build_model(config);
    const auto tensors = resolve_tensors(config, model.n, err);
    const auto sys = compile(model, tensors, config.compile);
    const auto& basis = tensors.basis();
    const auto v0 = initial_coherence(basis, model.initial.density(model.n));
    const double dt = step_size(model, config);
    const double t_end = config.integration.periods * model.drive.period;

    CsvFile traj(config.output.dir / config.output.trajectory);
    std::string header = "t";
    for (std::size_t x = 0; x < model.n; ++x) header += ",p_" + std::to_string(x);
    traj.line(header);
    PropagationOptions options;
    options.stride = config.integration.stride;
    const auto res = propagate(
        sys, model.drive, v0, t_end, dt,
        [&](std::size_t, double t, std::span<const double> v) {
          std::string row = num(t);
          for (double p : observables(basis, v)) row += "," + num(p);
          traj.line(row);
        },
        options);
    traj.close();
    write_final_state(config.output.dir / config.output.final_state, reconstruct_density(basis, res.v));
    if (res.purity_warning) {
      err << "warning: purity bound exceeded by " << res.max_purity_excess
          << "; the step size is probably too large\n";
    }
    out << "propagated N=" << model.n << " for " << res.steps << " steps to t=" << num(res.t) << "\n";
    return kExitOk;
  });
}

int cmd_scan(const RunConfig& config, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const auto points = run_scan(config, err);
    CsvFile csv(config.output.dir / config.output.scan);
    csv.line(config.scan.parameter + ",n,p_normalized");
    for (const auto& pt : points) {
      const double peak = *std::max_element(pt.probabilities.begin(), pt.probabilities.end());
      if (!(peak > 0.0)) throw NumericError("scan point " + num(pt.value) + " has no positive probability");
      for (std::size_t x = 0; x < pt.probabilities.size(); ++x) {
        csv.line(num(pt.value) + "," + std::to_string(x) + "," + num(pt.probabilities[x] / peak));
      }
    }
    csv.close();
    out << "scanned " << points.size() << " values of " << config.scan.parameter << "\n";
    return kExitOk;
  });
}

int cmd_validate(const RunConfig& config, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const auto n = model_dimension(config);
    if (n > kValidateMaxN) {
      throw SizeGuardError("validate runs dense reference checks and is limited to N <= " +
                           std::to_string(kValidateMaxN) + ", got N=" + std::to_string(n));
    }
    bool all_ok = true;
    auto report = [&](const std::string& name, bool ok, double err_value) {
      out << (ok ? "PASS " : "FAIL ") << name << " max_err=" << num(err_value) << "\n";
      all_ok = all_ok && ok;
    };
    auto report_text = [&](const std::string& name, bool ok, const std::string& detail) {
      out << (ok ? "PASS " : "FAIL ") << name << " " << detail << "\n";
      all_ok = all_ok && ok;
    };

    const GeneratorBasis basis(n);
    const auto f = f_nonzeros(n);
    const auto d = d_nonzeros(n);
    double f_err = 0.0;
    for (const auto& e : f.entries) f_err = std::max(f_err, std::abs(e.value - brute_force_f(basis, e.m, e.n, e.s)));
    double d_err = 0.0;
    for (const auto& e : d.entries) d_err = std::max(d_err, std::abs(e.value - brute_force_d(basis, e.m, e.n, e.s)));
    report_text("structure_constant_counts", f.nnz() == nz_f_count(n) && d.nnz() == nz_d_count(n),
                "f=" + std::to_string(f.nnz()) + " d=" + std::to_string(d.nnz()));
    report("structure_constants_f", f_err < 1e-12, f_err);
    report("structure_constants_d", d_err < 1e-12, d_err);

    if (!config.cache.dir.empty()) {
      for (auto tag : {TensorTag::kF, TensorTag::kD, TensorTag::kZ}) {
        const auto path = cache_file_path(config.cache.dir, n, tag);
        if (!std::filesystem::exists(path)) continue;
        try {
          if (tag == TensorTag::kZ) {
            (void)cache_load_complex(n, path);
          } else {
            (void)cache_load_real(n, tag, path);
          }
          report_text("cache_" + std::string(1, static_cast<char>(tag)), true, path.string());
        } catch (const CacheError& e) {
          report_text("cache_" + std::string(1, static_cast<char>(tag)), false, e.what());
        }
      }
    }

    const auto model = build_model(config);
    RunConfig fresh = config;
    fresh.cache.dir.clear();
    const auto tensors = resolve_tensors(fresh, n, err);
    const auto sys = compile(model, tensors, config.compile);
    const auto ref = compile_oracle(model);
    auto diff = [](const RealCsrMatrix& a, const Eigen::MatrixXd& b) { return (a.to_dense() - b).cwiseAbs().maxCoeff(); };
    const double q0 = diff(sys.q0, ref.q0);
    const double q1 = diff(sys.q1, ref.q1);
    const double r = diff(sys.r, ref.r);
    double k = 0.0;
    for (std::size_t i = 0; i < sys.k.size(); ++i) k = std::max(k, std::abs(sys.k[i] - ref.k(Eigen::Index(i))));
    report("compile_Q0", q0 < 1e-10, q0);
    report("compile_Q1", q1 < 1e-10, q1);
    report("compile_R", r < 1e-10, r);
    report("compile_K", k < 1e-10, k);
    auto skew = [](const RealCsrMatrix& q) { return (q.to_dense() + q.to_dense().transpose()).cwiseAbs().maxCoeff(); };
    const double skew_err = std::max(skew(sys.q0), skew(sys.q1));
    report("skew_symmetry", skew_err == 0.0, skew_err);
    report("trace_preservation", ref.trace_defect < 1e-12, ref.trace_defect);

    const double dt = step_size(model, config);
    const double t_end = config.integration.periods * model.drive.period;
    const auto rho0 = model.initial.density(n);
    const auto res = propagate(sys, model.drive, initial_coherence(basis, rho0), t_end, dt);
    const auto rho = reconstruct_density(basis, res.v);
    const auto rho_ref = oracle_propagate(model, rho0, t_end, dt);
    const double prop = (rho - rho_ref).cwiseAbs().maxCoeff();
    report("propagation", prop < 1e-8, prop);
    const double min_eig = positivity_check(rho);
    report("positivity", min_eig > -1e-8, std::max(0.0, -min_eig));
    return all_ok ? kExitOk : kExitChecksFailed;
  });
}

int cmd_bench(const RunConfig& config, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    if (config.model.type != "dimer") throw ConfigError("bench requires model.type = dimer");
    struct Row {
      std::size_t n;
      std::string step;
      double seconds;
      std::size_t peak;
    };
    std::vector<Row> rows;
    CsvFile csv(config.output.dir / config.output.bench);
    csv.line("N,step,seconds,peak_bytes");
    out << std::left << std::setw(6) << "N" << std::setw(26) << "step" << std::setw(14) << "seconds" << std::setw(16)
        << "peak_bytes" << "rss_peak_bytes\n";
    for (const auto n : config.bench.sizes) {
      RunConfig local = config;
      local.model.dimer.n = n;
      auto record = [&](const std::string& step, double secs) {
        rows.push_back({n, step, secs, memory::peak_bytes()});
        csv.line(std::to_string(n) + "," + step + "," + num(secs) + "," + std::to_string(memory::peak_bytes()));
        out << std::setw(6) << n << std::setw(26) << step << std::setw(14) << num(secs).substr(0, 12) << std::setw(16)
            << memory::peak_bytes() << memory::os_peak_rss_bytes() << "\n"
            << std::flush;
      };

      memory::reset_peak();
      auto start = Clock::now();
      std::optional<ModelSpec> model(build_model(local));
      std::optional<TensorSource> tensors(resolve_tensors(local, n, err));
      record("initialization", seconds_since(start));

      memory::reset_peak();
      start = Clock::now();
      std::optional<CompiledBloch> sys(compile(*model, *tensors, local.compile));
      record("data_preparation", seconds_since(start));

      memory::reset_peak();
      auto v = initial_coherence(tensors->basis(), model->initial.density(n));
      const double dt = step_size(*model, local);
      Rk4Workspace work(sys->m);
      std::size_t steps = 0;
      start = Clock::now();
      // at least measure_steps steps and at least a quarter second of work
      while (steps < local.bench.measure_steps || seconds_since(start) < 0.25) {
        rk4_step(*sys, model->drive, v, static_cast<double>(steps) * dt, dt, work);
        ++steps;
      }
      const double per_step = seconds_since(start) / static_cast<double>(steps);
      record("integration_per_period", per_step * static_cast<double>(local.integration.steps_per_period));

      memory::reset_peak();
      start = Clock::now();
      const auto rho = reconstruct_density(tensors->basis(), v);
      (void)observables(tensors->basis(), v);
      write_final_state(local.output.dir / "bench_final_state.csv", rho);
      record("finalization", seconds_since(start));
    }
    csv.close();

    CsvFile exps(config.output.dir / config.output.bench_exponents);
    exps.line("N_from,N_to,step,time_exponent,memory_exponent");
    out << "\nempirical exponents log(x2/x1)/log(N2/N1)\n";
    for (std::size_t i = 0; i < rows.size(); ++i) {
      for (std::size_t j = i + 1; j < rows.size(); ++j) {
        if (rows[j].step != rows[i].step) continue;
        const double ln = std::log(double(rows[j].n) / double(rows[i].n));
        const double te = std::log(rows[j].seconds / rows[i].seconds) / ln;
        const double me = std::log(double(rows[j].peak) / double(rows[i].peak)) / ln;
        exps.line(std::to_string(rows[i].n) + "," + std::to_string(rows[j].n) + "," + rows[i].step + "," + num(te) +
                  "," + num(me));
        out << "  " << rows[i].n << " -> " << rows[j].n << "  " << std::setw(24) << rows[i].step
            << " time " << std::setprecision(3) << te << "  memory " << me << std::setprecision(6) << "\n";
        break;
      }
    }
    exps.close();
    return kExitOk;
  });
}

int cmd_cache(std::size_t n, const std::vector<TensorTag>& kinds, const std::filesystem::path& dir, std::ostream& out,
              std::ostream& err) {
  return guarded(err, [&] {
    if (n < 2) throw ConfigError("cache: N must be at least 2");
    if (dir.empty()) throw ConfigError("cache: no cache directory given (--cache-dir or cache.dir)");
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw CacheError(CacheError::Kind::kIo, "cannot create " + dir.string() + ": " + ec.message());
    std::optional<RealTensor3> f, d;
    auto need_f = [&]() -> const RealTensor3& {
      if (!f) f = f_nonzeros(n);
      return *f;
    };
    auto need_d = [&]() -> const RealTensor3& {
      if (!d) d = d_nonzeros(n);
      return *d;
    };
    for (auto tag : kinds) {
      const auto path = cache_file_path(dir, n, tag);
      if (cache_is_valid(n, tag, path)) {
        out << "up to date: " << path.string() << "\n";
        continue;
      }
      if (tag == TensorTag::kF) cache_save(need_f(), path);
      if (tag == TensorTag::kD) cache_save(need_d(), path);
      if (tag == TensorTag::kZ) cache_save(z_nonzeros(need_f(), need_d()), path);
      out << "wrote " << path.string() << " (" << expected_entry_count(n, tag) << " entries)\n";
    }
    return kExitOk;
  });
}

}  // namespace sunbloch
