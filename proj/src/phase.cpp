#include <cmath>

#include "sharpstep/kernels.hpp"
#include "sharpstep/problems.hpp"
#include "pool_corruption.hpp"
#include "unit_direction.hpp"

namespace sharpstep {

PhaseInstance make_phase_instance(std::size_t d, double p_fail, Stream& rng) {
  if (d == 0) throw std::invalid_argument("phase retrieval needs d >= 1");
  if (!(p_fail >= 0.0 && p_fail < 0.5)) throw std::invalid_argument("p_fail must lie in [0, 1/2)");
  PhaseInstance instance;
  instance.signal.resize(d);
  detail::unit_direction(rng, instance.signal);
  instance.p_fail = p_fail;
  return instance;
}

void sample_phase(const PhaseInstance& instance, Stream& rng, PhaseMeasurement& out) {
  out.a.resize(instance.signal.size());
  rng.fill_normal(out.a);
  const double v = kernels::dot(out.a, instance.signal);
  out.b = v * v;
  out.corrupted = instance.p_fail > 0.0 && rng.bernoulli(instance.p_fail);
  if (out.corrupted) out.b += std::fabs(std::sqrt(instance.noise_variance) * rng.normal());
}

double phase_loss(ConstView x, const PhaseMeasurement& z) {
  const double v = kernels::dot(z.a, x);
  return std::fabs(v * v - z.b);
}

std::vector<PhaseMeasurement> make_phase_pool(const PhaseInstance& instance, std::size_t m,
                                              Stream& rng) {
  PhaseInstance clean = instance;
  clean.p_fail = 0.0;
  Stream draws = rng.child(0);
  Stream noise = rng.child(1);
  std::vector<PhaseMeasurement> pool(m);
  for (auto& z : pool) sample_phase(clean, draws, z);
  for (std::size_t i : detail::corrupted_indices(m, instance.p_fail, noise)) {
    pool[i].b += std::fabs(std::sqrt(instance.noise_variance) * noise.normal());
    pool[i].corrupted = true;
  }
  return pool;
}

double dist_phase(ConstView x, const PhaseInstance& instance) {
  double plus = 0.0;
  double minus = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double s = instance.signal[i];
    plus += (x[i] - s) * (x[i] - s);
    minus += (x[i] + s) * (x[i] + s);
  }
  return std::sqrt(std::min(plus, minus));
}

Vector random_init(const PhaseInstance& instance, double r0, Stream& rng) {
  Vector direction(instance.signal.size());
  detail::unit_direction(rng, direction);
  Vector x(direction.size());
  kernels::axpby(1.0, instance.signal, r0, direction, x);
  return x;
}

double estimate_phase_loss(ConstView x, const PhaseInstance& instance, std::size_t samples,
                           Stream& rng) {
  PhaseMeasurement z;
  double total = 0.0;
  for (std::size_t i = 0; i < samples; ++i) {
    sample_phase(instance, rng, z);
    total += phase_loss(x, z);
  }
  return total / static_cast<double>(samples);
}

}  // namespace sharpstep
