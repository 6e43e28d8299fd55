#pragma once

// Comparison methods for sparse logistic regression: regularized dual
// averaging (RDA) and stochastic proximal gradient with polynomially
// decaying stepsizes.  Both draw sample indices from the stream they are
// given in the same way the logistic oracle does, so equally seeded runs see
// the same index sequence.

#include <cstdint>
#include <functional>

#include "sharpstep/problems.hpp"
#include "sharpstep/rng.hpp"

namespace sharpstep {

// Points are (w, b) with w of length d; the running mean has length d + 1.
struct RdaState {
  Vector mean_gradient;
  std::uint64_t t = 0;
  double gamma = 1.0;
  double tau = 0.0;
};

RdaState make_rda_state(std::size_t dim, double gamma, double tau);

// argmin <g, z> + tau ||w||_1 + (gamma / (2 sqrt t)) ||z||^2 for the current
// mean g and count t:  w = -(sqrt t / gamma) S_tau(g_w),  b = -(sqrt t / gamma) g_b.
// Writes zero when t = 0.
void rda_minimizer(const RdaState& state, MutView out);

// Folds `gradient` into the running mean (t -> t + 1), then writes the new
// minimizer into `out`.
void rda_step(RdaState& state, ConstView gradient, MutView out);

// Called with the 1-based iteration index, the iterate after that step and
// the stepsize used (NaN for RDA).  Returning false stops the run.
using IterateCallback = std::function<bool(std::uint64_t iter, ConstView z, double stepsize)>;

// RDA from z_0 = 0, one sampled gradient per iteration.
Vector run_rda(const LogisticInstance& instance, double gamma, std::uint64_t iterations,
               Stream& samples, const IterateCallback& callback = {});

// z_{k+1} = prox_{lambda_k tau ||.||_1}(z_k - lambda_k g_k) with lambda_k = c k^(-p).
Vector prox_grad_poly(const LogisticInstance& instance, double c, double p,
                      std::uint64_t iterations, Stream& samples, ConstView z0,
                      const IterateCallback& callback = {});

}  // namespace sharpstep
