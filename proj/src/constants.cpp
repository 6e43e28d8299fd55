#include <cmath>
#include <limits>
#include <numbers>

#include "sharpstep/kernels.hpp"
#include "sharpstep/problems.hpp"

namespace sharpstep {
namespace {

// Mean and standard error accumulated in one pass (Welford).
struct Moments {
  std::size_t n = 0;
  double mean = 0.0;
  double m2 = 0.0;

  void add(double v) {
    ++n;
    const double delta = v - mean;
    mean += delta / static_cast<double>(n);
    m2 += delta * (v - mean);
  }
  MonteCarloEstimate estimate() const {
    const double var = n > 1 ? m2 / static_cast<double>(n - 1) : 0.0;
    return {mean, std::sqrt(var / static_cast<double>(n))};
  }
};

}  // namespace

double SharpnessProfile::tube_radius(double gamma) const {
  if (eta == 0.0) return std::numeric_limits<double>::infinity();
  return gamma * mu / eta;
}

SharpnessProfile phase_constants(const PhaseInstance& instance) {
  const double d = static_cast<double>(instance.signal.size());
  const double norm = std::sqrt(kernels::squared_norm(instance.signal));
  const double clean = 1.0 - 2.0 * instance.p_fail;
  SharpnessProfile profile;
  profile.mu_tilde = 2.0 / std::numbers::pi;
  profile.eta_tilde = 1.0;
  profile.lipschitz_tilde = std::sqrt(d + 2.0);
  profile.mu = clean * profile.mu_tilde * norm;
  profile.eta = profile.eta_tilde;
  profile.lipschitz = 2.0 * profile.lipschitz_tilde * norm *
                      (1.0 + clean * profile.mu_tilde / profile.eta_tilde);
  return profile;
}

SharpnessProfile blind_constants(const BlindInstance& instance) {
  const double d1 = static_cast<double>(instance.d1());
  const double d2 = static_cast<double>(instance.d2());
  const double scale = instance.scale();
  SharpnessProfile profile;
  profile.mu_tilde = 2.0 / std::numbers::pi;
  profile.eta_tilde = 1.0;
  profile.lipschitz_tilde = std::sqrt(d1 + d2 + 2.0 * std::sqrt((d1 + 2.0) * (d2 + 2.0)));
  profile.mu = profile.mu_tilde * (1.0 - 2.0 * instance.p_fail) * std::sqrt(scale) /
               (2.0 * std::numbers::sqrt2 * (instance.nu + 1.0));
  profile.eta = profile.eta_tilde;
  profile.lipschitz = instance.nu * profile.lipschitz_tilde * std::sqrt(scale);
  return profile;
}

SharpnessProfile logistic_constants(const LogisticInstance& instance, double mu_exponent) {
  const LogisticData& data = instance.data;
  double total = 0.0;
  for (std::size_t i = 0; i < data.size(); ++i) total += kernels::squared_norm(data.features.row(i));
  SharpnessProfile profile;
  profile.lipschitz = std::sqrt(total / static_cast<double>(data.size()));
  profile.mu = instance.tau * std::sqrt(static_cast<double>(data.dim())) *
               std::exp2(-mu_exponent);
  profile.eta = 0.0;
  return profile;
}

GaussianPhaseEstimates estimate_gaussian_phase(std::size_t d, std::size_t samples, Stream& rng) {
  if (samples < 10'000) throw std::invalid_argument("Monte Carlo estimates need >= 10^4 samples");
  if (d < 2) throw std::invalid_argument("Monte Carlo estimates need d >= 2");
  // Rotation invariance lets v = e_1, w = e_2 stand in for any orthonormal pair.
  Moments eta, lip2, mu;
  Vector a(d);
  for (std::size_t k = 0; k < samples; ++k) {
    rng.fill_normal(a);
    const double av = a[0];
    const double aw = a[1];
    eta.add(av * av);
    lip2.add(av * av * kernels::squared_norm(a));
    mu.add(std::fabs(av * aw));
  }
  GaussianPhaseEstimates out;
  out.eta_tilde = eta.estimate();
  out.mu_tilde = mu.estimate();
  const MonteCarloEstimate second = lip2.estimate();
  out.lipschitz_tilde.value = std::sqrt(second.value);
  out.lipschitz_tilde.std_error = second.std_error / (2.0 * out.lipschitz_tilde.value);
  return out;
}

}  // namespace sharpstep
