#pragma once

// Binary cache for structure-constant tensors.
//
// Layout (all integers little-endian):
//   bytes 0..3   magic "SUNT"
//   u32          format version (1)
//   u8           tensor tag: 'f', 'd' or 'z'
//   u64          N
//   u64          entry count
//   entries      u64 m, u64 n, u64 s, f64 value   (z: f64 re, f64 im)
//
// Entries are written in (m, n, s) order. On load the header is checked
// against the expected N and the count against the closed-form nonzero
// count for that N.

#include <cstdint>
#include <filesystem>

#include "sunbloch/sparse_tensor.hpp"

namespace sunbloch {

inline constexpr std::uint32_t kTensorCacheVersion = 1;

std::filesystem::path cache_file_path(const std::filesystem::path& dir, std::size_t n, TensorTag tag);

/// Declared entry count for a tensor kind, from the closed-form counts.
std::uint64_t expected_entry_count(std::size_t n, TensorTag tag);

void cache_save(const RealTensor3& t, const std::filesystem::path& path);
void cache_save(const ComplexTensor3& t, const std::filesystem::path& path);

/// Throws CacheError with a distinct kind for I/O failure, bad header,
/// N mismatch, truncation and integrity violations.
RealTensor3 cache_load_real(std::size_t n, TensorTag tag, const std::filesystem::path& path);
ComplexTensor3 cache_load_complex(std::size_t n, const std::filesystem::path& path);

/// True when `path` holds a valid cache of the given kind for N.
bool cache_is_valid(std::size_t n, TensorTag tag, const std::filesystem::path& path);

}  // namespace sunbloch
