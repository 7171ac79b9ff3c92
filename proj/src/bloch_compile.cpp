#include "sunbloch/bloch_compile.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "sunbloch/error.hpp"

namespace sunbloch {
namespace {

// Appends rows to a compressed-row matrix, dropping exact zeros.
class CsrBuilder {
 public:
  explicit CsrBuilder(std::size_t m) { out_ = RealCsrMatrix::zero(m, m); out_.row_ptr.clear(); out_.row_ptr.push_back(0); }

  void push(std::uint32_t col, double value) {
    if (value == 0.0) return;
    out_.col_idx.push_back(col);
    out_.values.push_back(value);
  }
  void end_row() { out_.row_ptr.push_back(out_.values.size()); }
  RealCsrMatrix finish() { return std::move(out_); }

 private:
  RealCsrMatrix out_;
};

// Dense accumulator with a list of touched slots, reset per row.
template <typename T>
class SparseAccumulator {
 public:
  explicit SparseAccumulator(std::size_t m) : value_(m, T{}), used_(m, 0) {}

  void add(std::uint32_t i, T v) {
    if (!used_[i]) {
      used_[i] = 1;
      touched_.push_back(i);
    }
    value_[i] += v;
  }

  template <typename Fn>
  void drain(Fn&& fn) {
    std::sort(touched_.begin(), touched_.end());
    for (auto i : touched_) {
      fn(i, value_[i]);
      value_[i] = T{};
      used_[i] = 0;
    }
    touched_.clear();
  }

 private:
  std::vector<T> value_;
  std::vector<std::uint8_t> used_;
  std::vector<std::uint32_t> touched_;
};

// Im(a b), spelled out so both strategies evaluate it identically.
inline double imag_product(Complex a, Complex b) { return a.real() * b.imag() + a.imag() * b.real(); }

void check_dimension(std::size_t size, const TensorSource& tensors, const char* what) {
  if (size != tensors.basis().m()) {
    std::ostringstream msg;
    msg << what << " has " << size << " coefficients, basis has M=" << tensors.basis().m();
    throw DimensionError(msg.str());
  }
}

// Compressed rows of complex values.
struct ComplexRows {
  std::vector<std::size_t> ptr;
  std::vector<std::uint32_t> col;
  std::vector<Complex> val;
};

// Accumulates runs of equal (m, n) in an entry list already ordered by
// (m, n), summing over s in list order.
ComplexRows accumulate_rows(const std::vector<TensorEntry<Complex>>& e, std::size_t m) {
  ComplexRows rows;
  rows.ptr.assign(m + 1, 0);
  std::size_t i = 0;
  while (i < e.size()) {
    const auto r = e[i].m;
    const auto c = e[i].n;
    Complex sum{};
    for (; i < e.size() && e[i].m == r && e[i].n == c; ++i) sum += e[i].value;
    if (sum != Complex{}) {
      rows.col.push_back(c);
      rows.val.push_back(sum);
      ++rows.ptr[r + 1];
    }
  }
  for (std::size_t r = 0; r < m; ++r) rows.ptr[r + 1] += rows.ptr[r];
  return rows;
}

// Z_lm = sum_k conj(l_k) z_klm, one row l at a time from slice l via
// z_klm = z_lmk. Slice l is ordered by (m, k) so each m is one run.
ComplexRows z_scaled_rows(const ComplexCoefficients& l, const TensorSource& tensors) {
  const auto m = tensors.basis().m();
  ComplexRows rows;
  rows.ptr.reserve(m + 1);
  rows.ptr.push_back(0);
  for (std::uint32_t row = 0; row < m; ++row) {
    bool open = false;
    std::uint32_t current = 0;
    Complex sum{};
    auto flush = [&] {
      if (open && sum != Complex{}) {
        rows.col.push_back(current);
        rows.val.push_back(sum);
      }
    };
    tensors.for_each_z(row, [&](std::uint32_t col, std::uint32_t k, Complex z) {
      if (l.is_zero(k)) return;
      if (!open || col != current) {
        flush();
        open = true;
        current = col;
        sum = Complex{};
      }
      sum += std::conj(l[k]) * z;
    });
    flush();
    rows.ptr.push_back(rows.col.size());
  }
  return rows;
}

// Global pipeline for Z: scale slices k into (k, l, m) entries, sort by
// (l, m) keeping k ascending, accumulate.
ComplexRows z_scaled_global(const ComplexCoefficients& l, const TensorSource& tensors) {
  const auto m = tensors.basis().m();
  std::vector<TensorEntry<Complex>> coo;
  for (std::size_t i = 0; i < l.nnz(); ++i) {
    const auto k = l.indices()[i];
    const auto lk = std::conj(l.values()[i]);
    tensors.for_each_z(k, [&](std::uint32_t row, std::uint32_t col, Complex z) {
      coo.push_back({row, col, k, lk * z});
    });
  }
  detail::counting_sort(coo, m, [](const auto& e) { return e.n; });
  detail::counting_sort(coo, m, [](const auto& e) { return e.m; });
  return accumulate_rows(coo, m);
}

// Global pipeline for F, transposed: scale slices j into (s, l, j) entries,
// sort by (s, l) keeping j ascending, accumulate. Row s lists F_ls.
ComplexRows f_scaled_global_by_s(const ComplexCoefficients& l, const TensorSource& tensors) {
  const auto m = tensors.basis().m();
  std::vector<TensorEntry<Complex>> coo;
  for (std::size_t i = 0; i < l.nnz(); ++i) {
    const auto j = l.indices()[i];
    const auto lj = l.values()[i];
    tensors.for_each_f(j, [&](std::uint32_t row, std::uint32_t s, double f) {
      coo.push_back({s, row, j, lj * f});
    });
  }
  detail::counting_sort(coo, m, [](const auto& e) { return e.n; });
  detail::counting_sort(coo, m, [](const auto& e) { return e.m; });
  return accumulate_rows(coo, m);
}

RealCsrMatrix r_single_global(const DissipatorChannel& ch, const TensorSource& tensors) {
  const auto m = tensors.basis().m();
  const auto f_by_s = f_scaled_global_by_s(ch.l, tensors);
  const auto z = z_scaled_global(ch.l, tensors);
  const double scale = -0.5 * ch.gamma;
  CsrBuilder out(m);
  std::map<std::uint32_t, double> row;
  for (std::uint32_t s = 0; s < m; ++s) {
    for (auto a = f_by_s.ptr[s]; a < f_by_s.ptr[s + 1]; ++a) {
      const auto l = f_by_s.col[a];
      const auto fl = f_by_s.val[a];
      for (auto b = z.ptr[l]; b < z.ptr[l + 1]; ++b) row[z.col[b]] += imag_product(fl, z.val[b]);
    }
    for (const auto& [col, v] : row) out.push(col, scale * v);
    out.end_row();
    row.clear();
  }
  return out.finish();
}

RealCsrMatrix r_single_blocked(const DissipatorChannel& ch, const TensorSource& tensors) {
  const auto m = tensors.basis().m();
  const auto z = z_scaled_rows(ch.l, tensors);
  const double scale = -0.5 * ch.gamma;
  CsrBuilder out(m);
  SparseAccumulator<Complex> f_col(m);
  SparseAccumulator<double> row(m);
  std::vector<std::pair<std::uint32_t, Complex>> fs;
  for (std::uint32_t s = 0; s < m; ++s) {
    // F_ls = sum_j l_j f_sjl from slice s, ordered by (j, l).
    tensors.for_each_f(s, [&](std::uint32_t j, std::uint32_t l, double f) {
      if (!ch.l.is_zero(j)) f_col.add(l, ch.l[j] * f);
    });
    fs.clear();
    f_col.drain([&](std::uint32_t l, Complex v) {
      if (v != Complex{}) fs.emplace_back(l, v);
    });
    for (const auto& [l, fl] : fs) {
      for (auto b = z.ptr[l]; b < z.ptr[l + 1]; ++b) row.add(z.col[b], imag_product(fl, z.val[b]));
    }
    row.drain([&](std::uint32_t col, double v) { out.push(col, scale * v); });
    out.end_row();
  }
  return out.finish();
}

AssemblyStrategy resolve(AssemblyStrategy s, std::size_t bytes, std::size_t budget) {
  if (s != AssemblyStrategy::kAuto) return s;
  return bytes <= budget ? AssemblyStrategy::kGlobalSort : AssemblyStrategy::kRowBlocked;
}

}  // namespace

std::size_t global_sort_bytes(std::span<const DissipatorChannel> channels, const TensorSource& tensors) {
  std::size_t entries = 0;
  for (const auto& ch : channels) {
    for (auto j : ch.l.indices()) entries += tensors.z_slice_size(j);
  }
  // coordinate list plus the counting-sort buffer
  return 2 * entries * sizeof(TensorEntry<Complex>);
}

RealCsrMatrix assemble_Q(const RealCoefficients& h, const TensorSource& tensors, AssemblyStrategy strategy) {
  check_dimension(h.size(), tensors, "Hamiltonian coefficient list");
  const auto m = tensors.basis().m();
  CsrBuilder out(m);
  if (h.nnz() == 0) return RealCsrMatrix::zero(m, m);

  if (strategy == AssemblyStrategy::kGlobalSort) {
    std::vector<TensorEntry<double>> coo;
    for (std::size_t i = 0; i < h.nnz(); ++i) {
      const auto hm = h.values()[i];
      const auto idx = h.indices()[i];
      tensors.for_each_f(idx, [&](std::uint32_t n, std::uint32_t s, double f) { coo.push_back({s, n, idx, hm * f}); });
    }
    detail::counting_sort(coo, m, [](const auto& e) { return e.n; });
    detail::counting_sort(coo, m, [](const auto& e) { return e.m; });
    std::size_t i = 0;
    for (std::uint32_t s = 0; s < m; ++s) {
      while (i < coo.size() && coo[i].m == s) {
        const auto n = coo[i].n;
        double sum = 0.0;
        for (; i < coo.size() && coo[i].m == s && coo[i].n == n; ++i) sum += coo[i].value;
        out.push(n, sum);
      }
      out.end_row();
    }
    return out.finish();
  }

  // q_sn = -sum_m h_m f_snm, slice s ordered by (n, m)
  for (std::uint32_t s = 0; s < m; ++s) {
    bool open = false;
    std::uint32_t current = 0;
    double sum = 0.0;
    tensors.for_each_f(s, [&](std::uint32_t n, std::uint32_t idx, double f) {
      if (h.is_zero(idx)) return;
      if (!open || n != current) {
        if (open) out.push(current, sum);
        open = true;
        current = n;
        sum = 0.0;
      }
      sum -= h[idx] * f;
    });
    if (open) out.push(current, sum);
    out.end_row();
  }
  return out.finish();
}

std::vector<double> assemble_K(std::span<const DissipatorChannel> channels, const TensorSource& tensors,
                               bool rate_scales_drift) {
  const auto m = tensors.basis().m();
  const double n = static_cast<double>(tensors.n());
  std::vector<double> k(m, 0.0);
  std::vector<Complex> acc(m);
  for (const auto& ch : channels) {
    check_dimension(ch.l.size(), tensors, "dissipator coefficient list");
    const double rate = rate_scales_drift ? ch.gamma : 1.0;
    if (rate == 0.0) continue;
    std::fill(acc.begin(), acc.end(), Complex{});
    double scale = 0.0;
    for (std::size_t i = 0; i < ch.l.nnz(); ++i) {
      const auto j = ch.l.indices()[i];
      const auto lj = ch.l.values()[i];
      tensors.for_each_f(j, [&](std::uint32_t kk, std::uint32_t s, double f) {
        if (ch.l.is_zero(kk)) return;
        const Complex term = lj * std::conj(ch.l[kk]) * f;
        acc[s] += term;
        scale = std::max(scale, std::abs(term));
      });
    }
    // k_s = (i rate / N) acc_s; acc_s is imaginary up to rounding
    for (std::uint32_t s = 0; s < m; ++s) {
      if (std::abs(acc[s].real()) > 1e-13 * std::max(1.0, scale)) {
        std::ostringstream msg;
        msg << "drift term has imaginary residue " << acc[s].real() << " at index " << s;
        throw NumericError(msg.str());
      }
      k[s] += -rate / n * acc[s].imag();
    }
  }
  return k;
}

RealCsrMatrix assemble_R(std::span<const DissipatorChannel> channels, const TensorSource& tensors,
                         AssemblyStrategy strategy) {
  const auto m = tensors.basis().m();
  RealCsrMatrix r = RealCsrMatrix::zero(m, m);
  for (const auto& ch : channels) {
    check_dimension(ch.l.size(), tensors, "dissipator coefficient list");
    if (ch.gamma < 0.0) throw ValidationError("channel rate must be non-negative");
    if (ch.gamma == 0.0 || ch.l.nnz() == 0) continue;
    const DissipatorChannel one[] = {ch};
    const auto s = resolve(strategy, global_sort_bytes(one, tensors), CompileOptions{}.memory_budget_bytes);
    auto part = s == AssemblyStrategy::kGlobalSort ? r_single_global(ch, tensors) : r_single_blocked(ch, tensors);
    r = r.nnz() == 0 ? std::move(part) : add(r, part);
  }
  return r;
}

CompiledBloch compile(const HamiltonianDecomposition& h, std::span<const DissipatorChannel> channels,
                      const TensorSource& tensors, const CompileOptions& options) {
  const auto strategy = resolve(options.strategy, global_sort_bytes(channels, tensors), options.memory_budget_bytes);
  CompiledBloch out;
  out.n = tensors.n();
  out.m = tensors.basis().m();
  out.q0 = assemble_Q(h.h0, tensors, strategy);
  out.q1 = assemble_Q(h.h1, tensors, strategy);
  out.r = assemble_R(channels, tensors, strategy);
  out.k = assemble_K(channels, tensors, options.rate_scales_drift);
  return out;
}

DecomposedModel decompose(const GeneratorBasis& basis, const ModelSpec& model) {
  if (model.n != basis.n()) throw DimensionError("model N differs from basis N");
  DecomposedModel out;
  out.h.h0 = expand_hermitian(basis, model.h0);
  out.h.h1 = expand_hermitian(basis, model.h1);
  for (const auto& ch : model.channels) out.channels.push_back({expand_general(basis, ch.l), ch.gamma});
  return out;
}

CompiledBloch compile(const ModelSpec& model, const TensorSource& tensors, const CompileOptions& options) {
  validate_model(model);
  const auto parts = decompose(tensors.basis(), model);
  return compile(parts.h, parts.channels, tensors, options);
}

IntermediateSizes intermediate_sizes(const DissipatorChannel& channel, const TensorSource& tensors) {
  IntermediateSizes sizes;
  sizes.z_scaled = z_scaled_rows(channel.l, tensors).col.size();
  const auto m = tensors.basis().m();
  SparseAccumulator<Complex> f_col(m);
  for (std::uint32_t s = 0; s < m; ++s) {
    tensors.for_each_f(s, [&](std::uint32_t j, std::uint32_t l, double f) {
      if (!channel.l.is_zero(j)) f_col.add(l, channel.l[j] * f);
    });
    f_col.drain([&](std::uint32_t, Complex v) {
      if (v != Complex{}) ++sizes.f_scaled;
    });
  }
  return sizes;
}

}  // namespace sunbloch
