#pragma once

// Heap accounting through replaced global operator new/delete. Linking any
// of these functions pulls the replacement into the binary.

#include <cstddef>

namespace sunbloch::memory {

/// Bytes currently allocated through operator new.
std::size_t live_bytes() noexcept;
/// High-water mark since the last reset_peak().
std::size_t peak_bytes() noexcept;
/// Sets the high-water mark to the current live size.
void reset_peak() noexcept;
/// Resident set size high-water mark reported by the OS, 0 if unavailable.
std::size_t os_peak_rss_bytes() noexcept;

}  // namespace sunbloch::memory
