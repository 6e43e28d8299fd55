#include "sharpstep/prox.hpp"

#include <algorithm>
#include <array>
#include <cassert>
#include <cmath>
#include <limits>

#include "sharpstep/kernels.hpp"
#include "sharpstep/polyroots.hpp"

namespace sharpstep::prox {
namespace {

constexpr double kTieTolerance = 1e-14;

double Sign(double v) { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); }

// Candidate ordering: least objective, then least movement, then a
// nonnegative scalar coordinate.
struct Candidate {
  double objective;
  double movement;
  double coordinate;
};

bool Better(const Candidate& a, const Candidate& b) {
  const double scale = std::max({1.0, std::fabs(a.objective), std::fabs(b.objective)});
  if (a.objective < b.objective - kTieTolerance * scale) return true;
  if (b.objective < a.objective - kTieTolerance * scale) return false;
  const double mscale = std::max({1.0, a.movement, b.movement});
  if (a.movement < b.movement - kTieTolerance * mscale) return true;
  if (b.movement < a.movement - kTieTolerance * mscale) return false;
  return a.coordinate >= 0.0 && b.coordinate < 0.0;
}

// Affine step shared by the abs and clipped forms: out = w + coef * g.
void AffineStep(double offset, ConstView slope, const QuadraticAnchor& anchor, MutView out) {
  const double gg = kernels::squared_norm(slope);
  if (gg == 0.0 || offset == 0.0) {
    std::copy(anchor.center.begin(), anchor.center.end(), out.begin());
    return;
  }
  const double t = std::min(1.0 / anchor.weight, std::fabs(offset) / gg);
  kernels::axpby(1.0, anchor.center, -Sign(offset) * t, slope, out);
}

}  // namespace

double rebase_offset(double offset, ConstView slope, ConstView basepoint, ConstView center) {
  double shift = 0.0;
  for (std::size_t i = 0; i < slope.size(); ++i) shift += slope[i] * (center[i] - basepoint[i]);
  return offset + shift;
}

double compose_anchor(double alpha, ConstView current, double rho, ConstView origin,
                      MutView center) {
  const double inv_alpha = 1.0 / alpha;
  const double weight = inv_alpha + rho;
  kernels::axpby(inv_alpha / weight, current, rho / weight, origin, center);
  return weight;
}

void linear_prox(ConstView slope, const QuadraticAnchor& anchor, MutView out) {
  kernels::axpby(1.0, anchor.center, -1.0 / anchor.weight, slope, out);
}

void affine_abs_prox(const AffineAbsModel& model, const QuadraticAnchor& anchor, MutView out) {
  AffineStep(model.offset, model.slope, anchor, out);
}

void clipped_affine_abs_prox(const AffineAbsModel& model, double lower_bound,
                             const QuadraticAnchor& anchor, MutView out) {
  const double excess = model.offset - lower_bound;
  if (excess <= 0.0) {
    std::copy(anchor.center.begin(), anchor.center.end(), out.begin());
    return;
  }
  AffineStep(excess, model.slope, anchor, out);
}

void quadratic_abs_prox(const QuadraticAbsModel& model, const QuadraticAnchor& anchor,
                        MutView out) {
  const ConstView a = model.direction;
  const double b = model.target;
  const double aa = kernels::squared_norm(a);
  if (aa == 0.0) {  // constant model
    std::copy(anchor.center.begin(), anchor.center.end(), out.begin());
    return;
  }
  const double v0 = kernels::dot(a, anchor.center);
  const double curvature = anchor.weight / aa;  // penalty is (curvature/2)(v - v0)^2

  auto make = [&](double v) {
    return Candidate{std::fabs(v * v - b) + 0.5 * curvature * (v - v0) * (v - v0),
                     std::fabs(v - v0), v};
  };

  std::array<double, 5> values{};
  std::size_t count = 0;
  values[count++] = v0;
  if (b >= 0.0) {
    const double root = std::sqrt(b);
    values[count++] = root;
    values[count++] = -root;
  }
  // Stationary point of the branch v^2 > b.
  {
    const double v = v0 / (1.0 + 2.0 * aa / anchor.weight);
    if (v * v > b) values[count++] = v;
  }
  // Stationary point of the branch v^2 < b; a minimum only when convex.
  {
    const double denom = 1.0 - 2.0 * aa / anchor.weight;
    if (denom > 0.0) {
      const double v = v0 / denom;
      if (v * v < b) values[count++] = v;
    }
  }

  double best_v = values[0];
  Candidate best = make(best_v);
  for (std::size_t i = 1; i < count; ++i) {
    const Candidate c = make(values[i]);
    if (Better(c, best)) {
      best = c;
      best_v = values[i];
    }
  }
  kernels::axpby(1.0, anchor.center, (best_v - v0) / aa, a, out);
}

BilinearProxInfo bilinear_abs_prox(const BilinearAbsModel& model, const QuadraticAnchor& anchor_x,
                                   const QuadraticAnchor& anchor_y, MutView out_x,
                                   MutView out_y) {
  BilinearProxInfo info;
  const double ll = kernels::squared_norm(model.left);
  const double rr = kernels::squared_norm(model.right);
  const double p0 = kernels::dot(model.left, anchor_x.center);
  const double q0 = kernels::dot(model.right, anchor_y.center);
  const double b = model.target;
  const double A = anchor_x.weight / ll;
  const double B = anchor_y.weight / rr;

  auto objective = [&](double p, double q) {
    return std::fabs(p * q - b) + 0.5 * A * (p - p0) * (p - p0) + 0.5 * B * (q - q0) * (q - q0);
  };
  auto make = [&](double p, double q) {
    const double move = std::sqrt((p - p0) * (p - p0) / ll + (q - q0) * (q - q0) / rr);
    return Candidate{objective(p, q), move, p};
  };

  double best_p = p0;
  double best_q = q0;
  Candidate best = make(p0, q0);
  auto offer = [&](double p, double q) {
    if (!std::isfinite(p) || !std::isfinite(q)) return;
    const Candidate c = make(p, q);
    if (Better(c, best)) {
      best = c;
      best_p = p;
      best_q = q;
    }
  };

  // Interior stationary points of the two smooth branches s = sign(pq - b).
  const double det = A * B - 1.0;
  if (det != 0.0) {
    for (double s : {1.0, -1.0}) {
      const double p = (A * B * p0 - s * B * q0) / det;
      const double q = (A * B * q0 - s * A * p0) / det;
      if (s * (p * q - b) > 0.0) offer(p, q);
    }
  }

  if (b == 0.0) {
    offer(0.0, q0);
    offer(p0, 0.0);
  } else {
    // Stationary points of the anchor restricted to the hyperbola pq = b:
    // A p^4 - A p0 p^3 + B b q0 p - B b^2 = 0.
    const std::array<double, 5> quartic{-B * b * b, B * b * q0, 0.0, -A * p0, A};
    std::vector<double> roots = poly::real_roots(quartic, 1e-12);
    std::erase(roots, 0.0);
    bool positive = false;
    bool negative = false;
    for (double p : roots) {
      positive |= p > 0.0;
      negative |= p < 0.0;
      offer(p, b / p);
    }
    // Each branch of the hyperbola carries at least one minimum of the
    // restricted anchor; if the root finder missed one, scan for it.
    if (!positive || !negative) {
      info.scan_fallback = true;
      auto restricted = [&](double p) {
        const double q = b / p;
        return 0.5 * A * (p - p0) * (p - p0) + 0.5 * B * (q - q0) * (q - q0);
      };
      const double span = std::max({1.0, std::fabs(p0), std::sqrt(std::fabs(b))}) * 1e4;
      for (double sign : {1.0, -1.0}) {
        if ((sign > 0.0 && positive) || (sign < 0.0 && negative)) continue;
        constexpr int kGrid = 4000;
        const double log_lo = std::log(span * 1e-12);
        const double log_hi = std::log(span);
        int best_i = 0;
        double best_val = std::numeric_limits<double>::infinity();
        for (int i = 0; i <= kGrid; ++i) {
          const double p = sign * std::exp(log_lo + (log_hi - log_lo) * i / kGrid);
          const double v = restricted(p);
          if (v < best_val) {
            best_val = v;
            best_i = i;
          }
        }
        double lo = sign * std::exp(log_lo + (log_hi - log_lo) * std::max(0, best_i - 1) / kGrid);
        double hi = sign * std::exp(log_lo + (log_hi - log_lo) * std::min(kGrid, best_i + 1) / kGrid);
        if (lo > hi) std::swap(lo, hi);
        const double golden = 0.5 * (std::sqrt(5.0) - 1.0);
        while (hi - lo > 1e-10 * std::max(1.0, std::fabs(lo))) {
          const double m1 = hi - golden * (hi - lo);
          const double m2 = lo + golden * (hi - lo);
          if (restricted(m1) < restricted(m2)) {
            hi = m2;
          } else {
            lo = m1;
          }
        }
        const double p = 0.5 * (lo + hi);
        offer(p, b / p);
      }
    }
  }

  kernels::axpby(1.0, anchor_x.center, (best_p - p0) / ll, model.left, out_x);
  kernels::axpby(1.0, anchor_y.center, (best_q - q0) / rr, model.right, out_y);
  return info;
}

void soft_threshold(ConstView v, double theta, MutView out) {
  kernels::soft_threshold(v, theta, out);
}

Vector soft_threshold(ConstView v, double theta) {
  Vector out(v.size());
  kernels::soft_threshold(v, theta, out);
  return out;
}

}  // namespace sharpstep::prox
