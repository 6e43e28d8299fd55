#include <cmath>

#include <fmt/format.h>

#include "sharpstep/solvers.hpp"

namespace sharpstep {
namespace {

// floor(x) as a count, rejecting values that do not fit.
std::uint64_t count_floor(double x, const char* what) {
  if (!std::isfinite(x) || x >= 9.2e18) throw ScheduleError(fmt::format("{} overflows ({:g})", what, x));
  return std::max<std::uint64_t>(1, static_cast<std::uint64_t>(std::floor(x)));
}

void require_constants(double mu, double lipschitz) {
  if (!(mu > 0.0)) throw ScheduleError(fmt::format("sharpness mu must be positive (got {:g})", mu));
  if (!(lipschitz > 0.0))
    throw ScheduleError(fmt::format("Lipschitz bound must be positive (got {:g})", lipschitz));
}

void require_gamma(double gamma) {
  if (!(gamma > 0.0 && gamma < 2.0))
    throw ScheduleError(fmt::format("gamma must lie in (0, 2) (got {:g})", gamma));
}

}  // namespace

int stage_count(double r0, double eps) {
  if (!(eps > 0.0)) throw ScheduleError(fmt::format("target accuracy must be positive (got {:g})", eps));
  if (!(eps < r0))
    throw ScheduleError(fmt::format("target accuracy {:g} must be below R0 = {:g}", eps, r0));
  int T = std::max(1, static_cast<int>(std::ceil(std::log2(r0 / eps))));
  // Correct for rounding in log2 so that T is the least integer with 2^T eps >= r0.
  while (std::ldexp(eps, T) < r0) ++T;
  while (T > 1 && std::ldexp(eps, T - 1) >= r0) --T;
  return T;
}

Schedule schedule_convex(double r0, double eps, double delta, double mu, double lipschitz) {
  require_constants(mu, lipschitz);
  if (!(delta > 0.0 && delta <= 1.0))
    throw ScheduleError(fmt::format("delta must lie in (0, 1] (got {:g})", delta));
  Schedule s;
  s.kind = "convex";
  s.r0 = r0;
  s.eps = eps;
  s.delta = delta;
  s.T = stage_count(r0, eps);
  const double ratio = lipschitz / (delta * mu);
  const double T = s.T;
  s.K = count_floor(8.0 * T * T * ratio * ratio, "K");
  s.alpha0 = std::sqrt(r0 * r0 / (2.0 * lipschitz * lipschitz * (static_cast<double>(s.K) + 1.0)));
  s.sample_bound = 8.0 * ratio * ratio * T * T * T;
  return s;
}

Schedule schedule_nonconvex(double r0, double eps, double delta2, double gamma, double mu,
                            double eta, double lipschitz) {
  require_constants(mu, lipschitz);
  require_gamma(gamma);
  if (!(delta2 > 0.0 && delta2 <= 1.0))
    throw ScheduleError(fmt::format("delta2 must lie in (0, 1] (got {:g})", delta2));
  if (eta > 0.0 && r0 > gamma * mu / eta)
    throw ScheduleError(fmt::format("R0 = {:g} exceeds the tube radius gamma mu / eta = {:g}", r0,
                                    gamma * mu / eta));
  Schedule s;
  s.kind = "nonconvex";
  s.r0 = r0;
  s.eps = eps;
  s.delta = delta2;
  s.gamma = gamma;
  s.T = stage_count(r0, eps);
  const double ratio = lipschitz / (delta2 * mu);
  const double T = s.T;
  const double pole = 16.0 / ((2.0 - gamma) * (2.0 - gamma));
  s.K = count_floor(pole * T * T * ratio * ratio, "K");
  s.alpha0 = std::sqrt(r0 * r0 / (lipschitz * lipschitz * (static_cast<double>(s.K) + 1.0)));
  const double escape = eta * r0 / (gamma * mu);
  s.success_probability = 1.0 - (8.0 / 3.0) * escape * escape - delta2;
  s.sample_bound = pole * ratio * ratio * T * T * T;
  return s;
}

Schedule schedule_highprob(double r0, double eps, double delta_prime, double gamma, double mu,
                           double eta, double lipschitz) {
  require_constants(mu, lipschitz);
  require_gamma(gamma);
  if (!(delta_prime > 0.0 && delta_prime < 1.0))
    throw ScheduleError(fmt::format("delta' must lie in (0, 1) (got {:g})", delta_prime));
  if (eta > 0.0 && r0 > gamma * mu / (4.0 * eta))
    throw ScheduleError(fmt::format("R0 = {:g} exceeds gamma mu / (4 eta) = {:g}", r0,
                                    gamma * mu / (4.0 * eta)));
  Schedule s;
  s.kind = "highprob";
  s.r0 = r0;
  s.eps = eps;
  s.delta = delta_prime;
  s.gamma = gamma;
  s.T = stage_count(r0, eps);
  s.rho0 = mu / (2.0 * r0);
  s.eps0 = r0 / 3.0;
  const double ratio = 864.0 * lipschitz / mu;
  s.K = count_floor(ratio * ratio, "K");
  s.M = std::max<std::uint64_t>(
      1, static_cast<std::uint64_t>(std::ceil(48.0 * std::log(s.T / delta_prime))));
  s.alpha0 = std::sqrt(r0 * r0 / (lipschitz * lipschitz * (static_cast<double>(s.K) + 1.0)));
  s.sample_bound = static_cast<double>(s.K) * s.T * static_cast<double>(s.M);
  return s;
}

}  // namespace sharpstep
