#include "sharpstep/baselines.hpp"

#include <cmath>
#include <limits>

#include "sharpstep/kernels.hpp"

namespace sharpstep {

RdaState make_rda_state(std::size_t dim, double gamma, double tau) {
  if (!(gamma > 0.0)) throw std::invalid_argument("RDA gamma must be positive");
  if (!(tau >= 0.0)) throw std::invalid_argument("tau must be nonnegative");
  return {Vector(dim, 0.0), 0, gamma, tau};
}

void rda_minimizer(const RdaState& state, MutView out) {
  const std::size_t d = state.mean_gradient.size() - 1;
  if (state.t == 0) {
    std::fill(out.begin(), out.end(), 0.0);
    return;
  }
  const double scale = -std::sqrt(static_cast<double>(state.t)) / state.gamma;
  kernels::soft_threshold(ConstView(state.mean_gradient).first(d), state.tau, out.first(d));
  for (std::size_t j = 0; j < d; ++j) out[j] *= scale;
  out[d] = scale * state.mean_gradient[d];
}

void rda_step(RdaState& state, ConstView gradient, MutView out) {
  ++state.t;
  const double w = 1.0 / static_cast<double>(state.t);
  // mean <- mean + (g - mean) / t
  for (std::size_t j = 0; j < state.mean_gradient.size(); ++j)
    state.mean_gradient[j] += w * (gradient[j] - state.mean_gradient[j]);
  rda_minimizer(state, out);
}

Vector run_rda(const LogisticInstance& instance, double gamma, std::uint64_t iterations,
               Stream& samples, const IterateCallback& callback) {
  const std::size_t dim = instance.data.dim() + 1;
  RdaState state = make_rda_state(dim, gamma, instance.tau);
  Vector z(dim, 0.0), grad(dim);
  for (std::uint64_t k = 1; k <= iterations; ++k) {
    const std::size_t i = samples.index(instance.data.size());
    logistic_sample_gradient(instance.data, i, z, grad);
    rda_step(state, grad, z);
    if (callback && !callback(k, z, std::numeric_limits<double>::quiet_NaN())) break;
  }
  return z;
}

Vector prox_grad_poly(const LogisticInstance& instance, double c, double p,
                      std::uint64_t iterations, Stream& samples, ConstView z0,
                      const IterateCallback& callback) {
  if (!(c > 0.0)) throw std::invalid_argument("stepsize constant must be positive");
  const std::size_t d = instance.data.dim();
  if (z0.size() != d + 1) throw std::invalid_argument("initial point has wrong dimension");
  Vector z(z0.begin(), z0.end()), grad(d + 1);
  for (std::uint64_t k = 1; k <= iterations; ++k) {
    const double step = c * std::pow(static_cast<double>(k), -p);
    const std::size_t i = samples.index(instance.data.size());
    logistic_sample_gradient(instance.data, i, z, grad);
    kernels::axpy(-step, grad, z);
    kernels::soft_threshold(MutView(z).first(d), step * instance.tau, MutView(z).first(d));
    if (callback && !callback(k, z, step)) break;
  }
  return z;
}

}  // namespace sharpstep
