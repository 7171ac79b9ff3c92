#include "sunbloch/tensor_cache.hpp"

#include <array>
#include <bit>
#include <cstring>
#include <fstream>
#include <string>
#include <vector>

#include "sunbloch/error.hpp"
#include "sunbloch/structure_constants.hpp"

namespace sunbloch {
namespace {

constexpr std::array<char, 4> kMagic{'S', 'U', 'N', 'T'};
constexpr std::size_t kHeaderBytes = 4 + 4 + 1 + 8 + 8;

template <typename U>
void put_le(std::vector<char>& buf, U value) {
  for (std::size_t i = 0; i < sizeof(U); ++i) buf.push_back(static_cast<char>((value >> (8 * i)) & 0xff));
}

void put_f64(std::vector<char>& buf, double v) { put_le(buf, std::bit_cast<std::uint64_t>(v)); }

template <typename U>
U get_le(const char* p) {
  U value = 0;
  for (std::size_t i = 0; i < sizeof(U); ++i) value |= static_cast<U>(static_cast<unsigned char>(p[i])) << (8 * i);
  return value;
}

double get_f64(const char* p) { return std::bit_cast<double>(get_le<std::uint64_t>(p)); }

template <typename T>
constexpr std::size_t entry_bytes() {
  return 3 * 8 + (std::is_same_v<T, double> ? 8 : 16);
}

template <typename T>
void save_impl(const SparseTensor3<T>& input, const std::filesystem::path& path) {
  const auto& t = input.layout == TensorLayout::kByMns ? input : sort_entries(input, TensorLayout::kByMns);

  std::vector<char> header;
  header.insert(header.end(), kMagic.begin(), kMagic.end());
  put_le(header, kTensorCacheVersion);
  header.push_back(static_cast<char>(t.tag));
  put_le(header, static_cast<std::uint64_t>(t.n));
  put_le(header, static_cast<std::uint64_t>(t.nnz()));

  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw CacheError(CacheError::Kind::kIo, "cannot open " + tmp.string() + " for writing");
    out.write(header.data(), static_cast<std::streamsize>(header.size()));
    std::vector<char> block;
    block.reserve(entry_bytes<T>() * 4096);
    for (std::size_t i = 0; i < t.entries.size(); ++i) {
      const auto& e = t.entries[i];
      put_le(block, std::uint64_t{e.m});
      put_le(block, std::uint64_t{e.n});
      put_le(block, std::uint64_t{e.s});
      if constexpr (std::is_same_v<T, double>) {
        put_f64(block, e.value);
      } else {
        put_f64(block, e.value.real());
        put_f64(block, e.value.imag());
      }
      if (block.size() >= entry_bytes<T>() * 4096 || i + 1 == t.entries.size()) {
        out.write(block.data(), static_cast<std::streamsize>(block.size()));
        block.clear();
      }
    }
    if (!out) throw CacheError(CacheError::Kind::kIo, "write failed for " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw CacheError(CacheError::Kind::kIo, "cannot move cache into place: " + ec.message());
}

template <typename T>
SparseTensor3<T> load_impl(std::size_t n, TensorTag tag, const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CacheError(CacheError::Kind::kIo, "cannot open cache file " + path.string());

  std::array<char, kHeaderBytes> header{};
  in.read(header.data(), header.size());
  if (in.gcount() != static_cast<std::streamsize>(header.size())) {
    throw CacheError(CacheError::Kind::kTruncated, "cache header truncated in " + path.string());
  }
  if (std::memcmp(header.data(), kMagic.data(), kMagic.size()) != 0) {
    throw CacheError(CacheError::Kind::kCorruptHeader, "bad magic in " + path.string());
  }
  const auto version = get_le<std::uint32_t>(header.data() + 4);
  if (version != kTensorCacheVersion) {
    throw CacheError(CacheError::Kind::kCorruptHeader, "unsupported cache version " + std::to_string(version));
  }
  const auto file_tag = header[8];
  if (file_tag != static_cast<char>(tag)) {
    throw CacheError(CacheError::Kind::kCorruptHeader,
                     std::string("cache holds tensor '") + file_tag + "', expected '" + static_cast<char>(tag) + "'");
  }
  const auto file_n = get_le<std::uint64_t>(header.data() + 9);
  if (file_n != n) {
    throw CacheError(CacheError::Kind::kDimensionMismatch,
                     "cache is for N=" + std::to_string(file_n) + ", requested N=" + std::to_string(n));
  }
  const auto count = get_le<std::uint64_t>(header.data() + 17);
  const auto expected = expected_entry_count(n, tag);
  if (count != expected) {
    throw CacheError(CacheError::Kind::kIntegrity, "cache declares " + std::to_string(count) +
                                                       " entries, closed form gives " + std::to_string(expected));
  }

  SparseTensor3<T> t;
  t.n = n;
  t.tag = tag;
  t.layout = TensorLayout::kByMns;
  t.entries.reserve(count);
  const std::uint64_t axis = n * n - 1;
  constexpr auto bytes = entry_bytes<T>();
  std::vector<char> block(bytes * 4096);
  std::uint64_t remaining = count;
  while (remaining > 0) {
    const auto batch = std::min<std::uint64_t>(remaining, 4096);
    in.read(block.data(), static_cast<std::streamsize>(batch * bytes));
    if (in.gcount() != static_cast<std::streamsize>(batch * bytes)) {
      throw CacheError(CacheError::Kind::kTruncated, "cache truncated after " + std::to_string(t.entries.size()) +
                                                         " of " + std::to_string(count) + " entries");
    }
    for (std::uint64_t i = 0; i < batch; ++i) {
      const char* p = block.data() + i * bytes;
      const auto m = get_le<std::uint64_t>(p);
      const auto nn = get_le<std::uint64_t>(p + 8);
      const auto s = get_le<std::uint64_t>(p + 16);
      if (m >= axis || nn >= axis || s >= axis) {
        throw CacheError(CacheError::Kind::kIntegrity, "cache entry index out of range");
      }
      T value;
      if constexpr (std::is_same_v<T, double>) {
        value = get_f64(p + 24);
      } else {
        value = T(get_f64(p + 24), get_f64(p + 32));
      }
      if (value == T{}) throw CacheError(CacheError::Kind::kIntegrity, "cache stores an explicit zero");
      const TensorEntry<T> e{static_cast<std::uint32_t>(m), static_cast<std::uint32_t>(nn),
                             static_cast<std::uint32_t>(s), value};
      if (!t.entries.empty()) {
        const auto& last = t.entries.back();
        if (std::tie(last.m, last.n, last.s) >= std::tie(e.m, e.n, e.s)) {
          throw CacheError(CacheError::Kind::kIntegrity, "cache entries out of (m, n, s) order");
        }
      }
      t.entries.push_back(e);
    }
    remaining -= batch;
  }
  if (in.peek() != std::char_traits<char>::eof()) {
    throw CacheError(CacheError::Kind::kIntegrity, "trailing bytes after declared entries");
  }
  return t;
}

}  // namespace

std::filesystem::path cache_file_path(const std::filesystem::path& dir, std::size_t n, TensorTag tag) {
  return dir / ("su" + std::to_string(n) + "_" + static_cast<char>(tag) + ".sunt");
}

std::uint64_t expected_entry_count(std::size_t n, TensorTag tag) {
  switch (tag) {
    case TensorTag::kF:
      return nz_f_count(n);
    case TensorTag::kD:
      return nz_d_count(n);
    case TensorTag::kZ:
      return nz_f_count(n) + nz_d_count(n);
  }
  return 0;
}

void cache_save(const RealTensor3& t, const std::filesystem::path& path) { save_impl(t, path); }
void cache_save(const ComplexTensor3& t, const std::filesystem::path& path) { save_impl(t, path); }

RealTensor3 cache_load_real(std::size_t n, TensorTag tag, const std::filesystem::path& path) {
  if (tag == TensorTag::kZ) throw CacheError(CacheError::Kind::kCorruptHeader, "z tensors are complex");
  return load_impl<double>(n, tag, path);
}

ComplexTensor3 cache_load_complex(std::size_t n, const std::filesystem::path& path) {
  return load_impl<Complex>(n, TensorTag::kZ, path);
}

bool cache_is_valid(std::size_t n, TensorTag tag, const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) return false;
  try {
    if (tag == TensorTag::kZ) {
      (void)cache_load_complex(n, path);
    } else {
      (void)cache_load_real(n, tag, path);
    }
    return true;
  } catch (const CacheError&) {
    return false;
  }
}

}  // namespace sunbloch
