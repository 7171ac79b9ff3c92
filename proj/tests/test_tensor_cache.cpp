#include <filesystem>
#include <fstream>

#include <doctest.h>

#include "sunbloch/error.hpp"
#include "sunbloch/structure_constants.hpp"
#include "sunbloch/tensor_cache.hpp"

using namespace sunbloch;

namespace {

std::filesystem::path scratch_dir() {
  const auto dir = std::filesystem::temp_directory_path() / "sunbloch_cache_test";
  std::filesystem::create_directories(dir);
  return dir;
}

CacheError::Kind load_error(std::size_t n, TensorTag tag, const std::filesystem::path& path) {
  try {
    if (tag == TensorTag::kZ) {
      (void)cache_load_complex(n, path);
    } else {
      (void)cache_load_real(n, tag, path);
    }
  } catch (const CacheError& e) {
    return e.kind();
  }
  FAIL("expected CacheError");
  return CacheError::Kind::kIo;
}

void overwrite_byte(const std::filesystem::path& path, std::streamoff offset, char value) {
  std::fstream f(path, std::ios::in | std::ios::out | std::ios::binary);
  f.seekp(offset);
  f.put(value);
}

}  // namespace

TEST_CASE("cache round trips") {
  const auto dir = scratch_dir();
  const auto f = f_nonzeros(4);
  const auto fp = cache_file_path(dir, 4, TensorTag::kF);
  CHECK(fp.filename() == "su4_f.sunt");
  cache_save(f, fp);
  CHECK(cache_load_real(4, TensorTag::kF, fp) == f);

  const auto d = d_nonzeros(4);
  cache_save(d, cache_file_path(dir, 4, TensorTag::kD));
  CHECK(cache_load_real(4, TensorTag::kD, cache_file_path(dir, 4, TensorTag::kD)) == d);

  const auto z = z_nonzeros(f, d);
  cache_save(z, cache_file_path(dir, 4, TensorTag::kZ));
  CHECK(cache_load_complex(4, cache_file_path(dir, 4, TensorTag::kZ)) == z);
  CHECK(cache_is_valid(4, TensorTag::kZ, cache_file_path(dir, 4, TensorTag::kZ)));
}

TEST_CASE("cache header declares the closed-form count") {
  const auto path = cache_file_path(scratch_dir(), 3, TensorTag::kF);
  cache_save(f_nonzeros(3), path);
  std::ifstream in(path, std::ios::binary);
  char header[25];
  in.read(header, 25);
  std::uint64_t count = 0;
  for (int i = 0; i < 8; ++i) count |= std::uint64_t(static_cast<unsigned char>(header[17 + i])) << (8 * i);
  CHECK(count == 54);
  CHECK(std::string(header, 4) == "SUNT");
  CHECK(header[8] == 'f');
  CHECK(std::filesystem::file_size(path) == 25 + 54 * 32);
}

TEST_CASE("cache load failures are distinct") {
  const auto dir = scratch_dir();
  const auto path = dir / "damaged.sunt";
  auto fresh = [&] { cache_save(f_nonzeros(3), path); };

  SUBCASE("missing file") { CHECK(load_error(3, TensorTag::kF, dir / "absent.sunt") == CacheError::Kind::kIo); }
  SUBCASE("wrong N") {
    fresh();
    CHECK(load_error(4, TensorTag::kF, path) == CacheError::Kind::kDimensionMismatch);
  }
  SUBCASE("bad magic") {
    fresh();
    overwrite_byte(path, 0, 'X');
    CHECK(load_error(3, TensorTag::kF, path) == CacheError::Kind::kCorruptHeader);
  }
  SUBCASE("wrong tensor tag") {
    fresh();
    CHECK(load_error(3, TensorTag::kD, path) == CacheError::Kind::kCorruptHeader);
  }
  SUBCASE("truncated") {
    fresh();
    std::filesystem::resize_file(path, 25 + 10 * 32 + 5);
    CHECK(load_error(3, TensorTag::kF, path) == CacheError::Kind::kTruncated);
    std::filesystem::resize_file(path, 12);
    CHECK(load_error(3, TensorTag::kF, path) == CacheError::Kind::kTruncated);
  }
  SUBCASE("count differs from the closed form") {
    fresh();
    overwrite_byte(path, 17, 53);
    CHECK(load_error(3, TensorTag::kF, path) == CacheError::Kind::kIntegrity);
  }
  SUBCASE("entry out of order") {
    fresh();
    overwrite_byte(path, 25 + 32, 7);  // second entry's m jumps past the third
    CHECK(load_error(3, TensorTag::kF, path) == CacheError::Kind::kIntegrity);
  }
  SUBCASE("trailing bytes") {
    fresh();
    std::ofstream(path, std::ios::app | std::ios::binary) << "xx";
    CHECK(load_error(3, TensorTag::kF, path) == CacheError::Kind::kIntegrity);
  }
}

TEST_CASE("tensor source from cached tensors compiles identically") {
  const auto dir = scratch_dir();
  const auto f = f_nonzeros(5);
  const auto z = z_nonzeros(f, d_nonzeros(5));
  cache_save(f, cache_file_path(dir, 5, TensorTag::kF));
  cache_save(z, cache_file_path(dir, 5, TensorTag::kZ));
  const auto src = TensorSource::from_tensors(cache_load_real(5, TensorTag::kF, cache_file_path(dir, 5, TensorTag::kF)),
                                              cache_load_complex(5, cache_file_path(dir, 5, TensorTag::kZ)));
  const auto fly = TensorSource::on_the_fly(5);
  for (std::uint32_t m = 0; m < 24; ++m) {
    std::vector<std::tuple<std::uint32_t, std::uint32_t, Complex>> a, b;
    src.for_each_z(m, [&](std::uint32_t n, std::uint32_t s, Complex v) { a.emplace_back(n, s, v); });
    fly.for_each_z(m, [&](std::uint32_t n, std::uint32_t s, Complex v) { b.emplace_back(n, s, v); });
    CHECK(a == b);
  }
}
