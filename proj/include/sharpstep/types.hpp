#pragma once

#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace sharpstep {

using Vector = std::vector<double>;
using ConstView = std::span<const double>;
using MutView = std::span<double>;

// Row-major dense matrix; rows are contiguous measurement vectors.
struct Matrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  Vector data;

  Matrix() = default;
  Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0.0) {}

  ConstView row(std::size_t r) const { return {data.data() + r * cols, cols}; }
  MutView row(std::size_t r) { return {data.data() + r * cols, cols}; }
};

// Raised when an algorithm schedule cannot be formed from the supplied
// constants (e.g. the initial radius lies outside the tube).
class ScheduleError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Malformed input file (IDX payloads, config files).
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace sharpstep
