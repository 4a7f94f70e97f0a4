#pragma once

#include <cstddef>

namespace rzl::config {

inline constexpr std::size_t kDefaultCellCap = 1000000;

/// Largest ambient dimension triangulate_cube accepts (n! cells).
inline constexpr int kMaxCubeDim = 8;

namespace detail {
inline std::size_t& cell_cap_storage() {
  static std::size_t cap = kDefaultCellCap;
  return cap;
}
}  // namespace detail

/// Upper bound on the number of cells any single subdivision may produce.
/// Exceeding it raises cell_cap_exceeded. Default 10^6, settable per run.
inline std::size_t cell_cap() { return detail::cell_cap_storage(); }
inline void set_cell_cap(std::size_t cap) { detail::cell_cap_storage() = cap; }

}  // namespace rzl::config
