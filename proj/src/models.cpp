#include "sunbloch/models.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <string>

#include "sunbloch/error.hpp"

namespace sunbloch {
namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string at_line(const std::filesystem::path& path, std::size_t line) {
  return path.string() + ":" + std::to_string(line) + ": ";
}

double parse_double(const std::string& text, const std::string& where) {
  double v = 0.0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc{} || ptr != end || !std::isfinite(v)) throw ConfigError(where + "expected a number, got '" + text + "'");
  return v;
}

std::size_t parse_size(const std::string& text, const std::string& where) {
  std::size_t v = 0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc{} || ptr != end) throw ConfigError(where + "expected a non-negative integer, got '" + text + "'");
  return v;
}

double hop(std::size_t n1, std::size_t n) {
  return std::sqrt(static_cast<double>((n1 + 1) * (n - 1 - n1)));
}

void check_params(const DimerParams& p) {
  if (p.n < 2) throw ValidationError("dimer needs N >= 2");
  if (!(p.T > 0.0)) throw ValidationError("drive period T must be positive");
  if (p.gamma < 0.0) throw ValidationError("gamma must be non-negative");
}

}  // namespace

Eigen::MatrixXcd InitialState::density(std::size_t n) const {
  const auto ni = static_cast<Eigen::Index>(n);
  if (kind == Kind::kMaximallyMixed) return Eigen::MatrixXcd::Identity(ni, ni) / static_cast<double>(n);
  if (index >= n) throw DimensionError("initial basis state index out of range");
  Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(ni, ni);
  rho(static_cast<Eigen::Index>(index), static_cast<Eigen::Index>(index)) = 1.0;
  return rho;
}

std::pair<SparseComplexMatrix, SparseComplexMatrix> dimer_hamiltonian_parts(const DimerParams& p) {
  check_params(p);
  const auto n = p.n;
  const double u = 2.0 * p.U / static_cast<double>(n - 1);
  std::vector<Triplet<Complex>> h0;
  std::vector<Triplet<Complex>> h1;
  for (std::size_t n1 = 0; n1 < n; ++n1) {
    const auto n2 = n - 1 - n1;
    const auto r = static_cast<std::uint32_t>(n1);
    const double a = static_cast<double>(n1);
    const double b = static_cast<double>(n2);
    h0.push_back({r, r, u * (a * (a - 1.0) + b * (b - 1.0)) + p.E * (b - a)});
    h1.push_back({r, r, p.A * (b - a)});
    if (n1 + 1 < n) {
      const double t = p.J * hop(n1, n);
      h0.push_back({r + 1, r, t});
      h0.push_back({r, r + 1, t});
    }
  }
  return {SparseComplexMatrix::from_triplets(n, std::move(h0)), SparseComplexMatrix::from_triplets(n, std::move(h1))};
}

SparseComplexMatrix dimer_dissipator(const DimerParams& p) {
  check_params(p);
  const auto n = p.n;
  const double c = (p.convention == GammaConvention::kAmplitude ? p.gamma : 1.0) / static_cast<double>(n - 1);
  std::vector<Triplet<Complex>> l;
  for (std::size_t n1 = 0; n1 < n; ++n1) {
    const auto r = static_cast<std::uint32_t>(n1);
    l.push_back({r, r, c * (2.0 * static_cast<double>(n1) - static_cast<double>(n - 1))});
    if (n1 + 1 < n) {
      // -b1^+ b2 raises n1, +b2^+ b1 lowers it
      l.push_back({r + 1, r, -c * hop(n1, n)});
      l.push_back({r, r + 1, c * hop(n1, n)});
    }
  }
  return SparseComplexMatrix::from_triplets(n, std::move(l));
}

ModelSpec dimer_model(const DimerParams& p) {
  ModelSpec model;
  model.n = p.n;
  std::tie(model.h0, model.h1) = dimer_hamiltonian_parts(p);
  model.drive = {p.drive, p.T};
  if (p.gamma > 0.0) {
    model.channels.push_back({dimer_dissipator(p), p.convention == GammaConvention::kAmplitude ? 1.0 : p.gamma});
  }
  model.initial = {InitialState::Kind::kBasisState, 0};
  return model;
}

void validate_model(const ModelSpec& model) {
  if (model.n < 2) throw ValidationError("model dimension N must be at least 2");
  auto check_h = [&](const SparseComplexMatrix& h, const char* name) {
    if (h.dim() != model.n) throw ValidationError(std::string(name) + " dimension differs from N");
    double scale = 1.0;
    for (auto v : h.values()) scale = std::max(scale, std::abs(v));
    if (h.hermiticity_defect() > 1e-14 * scale) throw ValidationError(std::string(name) + " is not Hermitian");
  };
  check_h(model.h0, "H0");
  check_h(model.h1, "H1");
  if (!(model.drive.period > 0.0)) throw ValidationError("drive period must be positive");
  for (std::size_t p = 0; p < model.channels.size(); ++p) {
    const auto& ch = model.channels[p];
    const auto label = "channel " + std::to_string(p);
    if (ch.l.dim() != model.n) throw ValidationError(label + " dimension differs from N");
    if (!(ch.gamma >= 0.0)) throw ValidationError(label + " rate must be non-negative");
    const auto tr = ch.l.trace();
    if (std::abs(tr) > 1e-10) {
      std::ostringstream msg;
      msg << label << " is not traceless (trace " << tr.real() << (tr.imag() < 0 ? "" : "+") << tr.imag() << "i)";
      throw ValidationError(msg.str());
    }
  }
  if (model.initial.kind == InitialState::Kind::kBasisState && model.initial.index >= model.n) {
    throw ValidationError("initial basis state index out of range");
  }
}

InitialState parse_initial_state(const std::string& text, std::size_t n) {
  if (text == "mixed") return {InitialState::Kind::kMaximallyMixed, 0};
  if (text.rfind("basis:", 0) == 0) {
    const auto k = parse_size(text.substr(6), "initial: ");
    if (k >= n) throw ConfigError("initial: basis state " + std::to_string(k) + " outside 0.." + std::to_string(n - 1));
    return {InitialState::Kind::kBasisState, k};
  }
  throw ConfigError("initial: expected 'basis:<k>' or 'mixed', got '" + text + "'");
}

GammaConvention parse_gamma_convention(const std::string& text) {
  if (text == "amplitude") return GammaConvention::kAmplitude;
  if (text == "rate") return GammaConvention::kRate;
  throw ConfigError("gamma_convention: expected 'amplitude' or 'rate', got '" + text + "'");
}

ModelSpec load_model(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open model file " + path.string());

  struct MatrixLine {
    std::size_t line;
    std::string target;
    std::uint32_t row, col;
    Complex value;
  };
  std::map<std::string, std::pair<std::string, std::size_t>> keys;
  std::vector<MatrixLine> matrix_lines;
  std::vector<std::pair<double, std::size_t>> channel_rates;

  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const auto hash = raw.find('#');
    const auto line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (line.empty()) continue;
    const auto where = at_line(path, line_no);
    const auto eq = line.find('=');
    if (eq != std::string::npos) {
      const auto key = trim(line.substr(0, eq));
      const auto value = trim(line.substr(eq + 1));
      if (key.empty() || value.empty()) throw ConfigError(where + "malformed 'key = value' line");
      if (keys.count(key)) throw ConfigError(where + "duplicate key '" + key + "'");
      keys[key] = {value, line_no};
      continue;
    }
    std::istringstream tok(line);
    std::string head;
    tok >> head;
    if (head == "channel") {
      std::string rate;
      if (!(tok >> rate)) throw ConfigError(where + "channel needs a rate");
      channel_rates.emplace_back(parse_double(rate, where), line_no);
      continue;
    }
    if (head == "H0" || head == "H1" || head == "L") {
      std::string r, c, re, im;
      if (!(tok >> r >> c >> re >> im)) throw ConfigError(where + head + " line needs: row col re im");
      if (head == "L" && channel_rates.empty()) throw ConfigError(where + "L entry before any 'channel' line");
      matrix_lines.push_back({line_no, head == "L" ? "L" + std::to_string(channel_rates.size() - 1) : head,
                              static_cast<std::uint32_t>(parse_size(r, where)),
                              static_cast<std::uint32_t>(parse_size(c, where)),
                              Complex(parse_double(re, where), parse_double(im, where))});
      continue;
    }
    throw ConfigError(where + "unrecognised line '" + line + "'");
  }

  std::map<std::string, bool> used;
  auto get = [&](const std::string& key) -> const std::pair<std::string, std::size_t>& {
    const auto it = keys.find(key);
    if (it == keys.end()) throw ConfigError(path.string() + ": missing required key '" + key + "'");
    used[key] = true;
    return it->second;
  };
  auto get_or = [&](const std::string& key, const std::string& fallback) {
    const auto it = keys.find(key);
    if (it == keys.end()) return fallback;
    used[key] = true;
    return it->second.first;
  };
  auto number = [&](const std::string& key) {
    const auto& [v, line] = get(key);
    return parse_double(v, at_line(path, line) + key + ": ");
  };

  const auto type = get("type").first;
  const auto& [n_text, n_line] = get("N");
  const auto n = parse_size(n_text, at_line(path, n_line) + "N: ");
  if (n < 2) throw ConfigError(at_line(path, n_line) + "N must be at least 2");

  ModelSpec model;
  try {
    if (type == "dimer") {
      if (!matrix_lines.empty() || !channel_rates.empty()) {
        throw ConfigError(at_line(path, matrix_lines.empty() ? channel_rates[0].second : matrix_lines[0].line) +
                          "matrix lines are not allowed for type = dimer");
      }
      DimerParams p;
      p.n = n;
      p.J = number("J");
      p.U = number("U");
      p.E = number("E");
      p.A = number("A");
      p.T = number("T");
      p.gamma = number("gamma");
      p.drive = parse_drive_kind(get_or("drive", "piecewise"));
      p.convention = parse_gamma_convention(get_or("gamma_convention", "amplitude"));
      model = dimer_model(p);
      model.initial = parse_initial_state(get_or("initial", "basis:0"), n);
    } else if (type == "generic") {
      model.n = n;
      model.drive = {parse_drive_kind(get_or("drive", "none")), 1.0};
      const auto period = get_or("period", "");
      if (!period.empty()) model.drive.period = parse_double(period, path.string() + ": period: ");
      if (model.drive.kind != DriveKind::kNone && period.empty()) get("period");
      model.initial = parse_initial_state(get_or("initial", "basis:0"), n);
      std::map<std::string, std::vector<Triplet<Complex>>> entries;
      for (const auto& ml : matrix_lines) {
        if (ml.row >= n || ml.col >= n) {
          throw ConfigError(at_line(path, ml.line) + "entry (" + std::to_string(ml.row) + ", " +
                            std::to_string(ml.col) + ") outside an " + std::to_string(n) + "x" + std::to_string(n) +
                            " matrix");
        }
        entries[ml.target].push_back({ml.row, ml.col, ml.value});
      }
      model.h0 = SparseComplexMatrix::from_triplets(n, entries["H0"]);
      model.h1 = SparseComplexMatrix::from_triplets(n, entries["H1"]);
      for (std::size_t p = 0; p < channel_rates.size(); ++p) {
        model.channels.push_back(
            {SparseComplexMatrix::from_triplets(n, entries["L" + std::to_string(p)]), channel_rates[p].first});
      }
    } else {
      throw ConfigError(at_line(path, keys["type"].second) + "type must be 'dimer' or 'generic', got '" + type + "'");
    }
  } catch (const ValidationError& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
  for (const auto& [key, value] : keys) {
    if (!used.count(key)) throw ConfigError(at_line(path, value.second) + "unknown key '" + key + "'");
  }
  validate_model(model);
  return model;
}

}  // namespace sunbloch
