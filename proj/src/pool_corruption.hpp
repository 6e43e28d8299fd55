#pragma once

#include <cmath>
#include <numeric>
#include <vector>

#include "sharpstep/rng.hpp"

namespace sharpstep::detail {

// floor(p m) distinct indices out of m, uniformly (partial Fisher-Yates).
inline std::vector<std::size_t> corrupted_indices(std::size_t m, double p, Stream& rng) {
  const auto count = static_cast<std::size_t>(std::floor(p * static_cast<double>(m)));
  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), 0);
  for (std::size_t k = 0; k < count; ++k) std::swap(order[k], order[k + rng.index(m - k)]);
  order.resize(count);
  return order;
}

}  // namespace sharpstep::detail
