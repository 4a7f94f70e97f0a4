#pragma once

#include <stdexcept>
#include <string>

namespace rzl {

/// Malformed textual input: formulas, scalars, points, table or JSON files.
/// Carries a human-readable position when one is known.
class parse_error : public std::runtime_error {
public:
  explicit parse_error(const std::string& what) : std::runtime_error(what) {}
  parse_error(const std::string& what, std::size_t line, std::size_t col)
      : std::runtime_error(what + " (line " + std::to_string(line) + ", column " +
                           std::to_string(col) + ")") {}
};

/// Structurally valid input that violates a documented precondition
/// (scalar outside [0,1], point outside the cube, arity mismatch, ...).
class domain_error : public std::runtime_error {
public:
  explicit domain_error(const std::string& what) : std::runtime_error(what) {}
};

/// A subdivision grew past the configured cell budget.
class cell_cap_exceeded : public std::runtime_error {
public:
  explicit cell_cap_exceeded(std::size_t have, std::size_t cap)
      : std::runtime_error("cell budget exceeded: " + std::to_string(have) +
                           " cells, cap " + std::to_string(cap)),
        cells(have), cap_value(cap) {}
  std::size_t cells;
  std::size_t cap_value;
};

/// An internal invariant failed; indicates a bug, never bad user input.
class internal_error : public std::logic_error {
public:
  explicit internal_error(const std::string& what) : std::logic_error(what) {}
};

}  // namespace rzl
