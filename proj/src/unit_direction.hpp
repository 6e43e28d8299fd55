#pragma once

#include <cmath>

#include "sharpstep/kernels.hpp"
#include "sharpstep/rng.hpp"
#include "sharpstep/types.hpp"

namespace sharpstep::detail {

// Uniform direction on the unit sphere (normalized Gaussian).
inline void unit_direction(Stream& rng, MutView out) {
  double norm2 = 0.0;
  do {
    rng.fill_normal(out);
    norm2 = kernels::squared_norm(out);
  } while (norm2 == 0.0);
  const double inv = 1.0 / std::sqrt(norm2);
  for (double& v : out) v *= inv;
}

}  // namespace sharpstep::detail
