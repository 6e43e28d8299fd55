#include <array>
#include <cmath>
#include <limits>

#include "sharpstep/kernels.hpp"
#include "sharpstep/polyroots.hpp"
#include "sharpstep/problems.hpp"
#include "pool_corruption.hpp"
#include "unit_direction.hpp"

namespace sharpstep {

double BlindInstance::scale() const {
  return std::sqrt(kernels::squared_norm(left_signal) * kernels::squared_norm(right_signal));
}

BlindInstance make_blind_instance(std::size_t d1, std::size_t d2, double p_fail, double nu,
                                  Stream& rng) {
  if (d1 == 0 || d2 == 0) throw std::invalid_argument("blind deconvolution needs d1, d2 >= 1");
  if (!(p_fail >= 0.0 && p_fail < 0.5)) throw std::invalid_argument("p_fail must lie in [0, 1/2)");
  if (!(nu > 1.0)) throw std::invalid_argument("nu must exceed 1");
  BlindInstance instance;
  instance.left_signal.resize(d1);
  instance.right_signal.resize(d2);
  detail::unit_direction(rng, instance.left_signal);
  detail::unit_direction(rng, instance.right_signal);
  instance.p_fail = p_fail;
  instance.nu = nu;
  return instance;
}

void sample_blind(const BlindInstance& instance, Stream& rng, BlindMeasurement& out) {
  out.left.resize(instance.d1());
  out.right.resize(instance.d2());
  rng.fill_normal(out.left);
  rng.fill_normal(out.right);
  out.b = kernels::dot(out.left, instance.left_signal) * kernels::dot(out.right, instance.right_signal);
  out.corrupted = instance.p_fail > 0.0 && rng.bernoulli(instance.p_fail);
  if (out.corrupted) out.b += std::sqrt(instance.noise_variance) * rng.normal();
}

double blind_loss(ConstView xy, const BlindMeasurement& z) {
  const std::size_t d1 = z.left.size();
  const double p = kernels::dot(z.left, xy.first(d1));
  const double q = kernels::dot(z.right, xy.subspan(d1));
  return std::fabs(p * q - z.b);
}

std::vector<BlindMeasurement> make_blind_pool(const BlindInstance& instance, std::size_t m,
                                              Stream& rng) {
  BlindInstance clean = instance;
  clean.p_fail = 0.0;
  Stream draws = rng.child(0);
  Stream noise = rng.child(1);
  std::vector<BlindMeasurement> pool(m);
  for (auto& z : pool) sample_blind(clean, draws, z);
  for (std::size_t i : detail::corrupted_indices(m, instance.p_fail, noise)) {
    pool[i].b += std::sqrt(instance.noise_variance) * noise.normal();
    pool[i].corrupted = true;
  }
  return pool;
}

double dist_blind(ConstView x, ConstView y, const BlindInstance& instance) {
  const ConstView xbar = instance.left_signal;
  const ConstView ybar = instance.right_signal;
  auto squared = [&](double alpha) {
    double total = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double r = x[i] - alpha * xbar[i];
      total += r * r;
    }
    for (std::size_t i = 0; i < y.size(); ++i) {
      const double r = y[i] - ybar[i] / alpha;
      total += r * r;
    }
    return total;
  };
  const double nu = instance.nu;
  // Stationarity of the squared distance in alpha, multiplied by alpha^3 / 2.
  const std::array<double, 5> quartic{-kernels::squared_norm(ybar), kernels::dot(y, ybar), 0.0,
                                      -kernels::dot(x, xbar), kernels::squared_norm(xbar)};
  double best = std::numeric_limits<double>::infinity();
  for (double sign : {1.0, -1.0}) {
    const double lo = sign > 0 ? 1.0 / nu : -nu;
    const double hi = sign > 0 ? nu : -1.0 / nu;
    best = std::min({best, squared(lo), squared(hi)});
    for (double alpha : poly::real_roots_in(quartic, lo, hi)) best = std::min(best, squared(alpha));
  }
  return std::sqrt(best);
}

double dist_blind(ConstView xy, const BlindInstance& instance) {
  return dist_blind(xy.first(instance.d1()), xy.subspan(instance.d1()), instance);
}

void project_blind(MutView xy, const BlindInstance& instance) {
  const double radius = instance.nu * instance.scale();
  auto project = [radius](MutView v) {
    const double norm = std::sqrt(kernels::squared_norm(v));
    if (norm > radius) {
      const double s = radius / norm;
      for (double& e : v) e *= s;
    }
  };
  project(xy.first(instance.d1()));
  project(xy.subspan(instance.d1()));
}

Vector random_init(const BlindInstance& instance, double r0, Stream& rng) {
  const std::size_t d1 = instance.d1();
  Vector direction(d1 + instance.d2());
  detail::unit_direction(rng, direction);
  Vector xy(direction.size());
  for (std::size_t i = 0; i < d1; ++i) xy[i] = instance.left_signal[i] + r0 * direction[i];
  for (std::size_t i = 0; i < instance.d2(); ++i)
    xy[d1 + i] = instance.right_signal[i] + r0 * direction[d1 + i];
  return xy;
}

}  // namespace sharpstep
