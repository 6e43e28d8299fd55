#include "sharpstep/polyroots.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace sharpstep::poly {
namespace {

std::vector<double> Trimmed(std::span<const double> coeffs) {
  std::vector<double> c(coeffs.begin(), coeffs.end());
  while (!c.empty() && c.back() == 0.0) c.pop_back();
  return c;
}

// Magnitude scale of the terms of p at x; used for a rounding-level test.
double TermScale(const std::vector<double>& c, double x) {
  double s = 0.0;
  double power = 1.0;
  for (double ci : c) {
    s += std::fabs(ci) * power;
    power *= std::fabs(x);
  }
  return s;
}

double Refine(const std::vector<double>& c, const std::vector<double>& dc, double lo, double hi,
              double tol) {
  double f_lo = evaluate(c, lo);
  double x = 0.5 * (lo + hi);
  for (int iter = 0; iter < 300; ++iter) {
    const double fx = evaluate(c, x);
    if (fx == 0.0) return x;
    if ((fx < 0.0) == (f_lo < 0.0)) {
      lo = x;
      f_lo = fx;
    } else {
      hi = x;
    }
    const double width_tol = tol * std::max({1.0, std::fabs(lo), std::fabs(hi)});
    if (hi - lo <= width_tol) return 0.5 * (lo + hi);
    const double slope = evaluate(dc, x);
    double next = 0.5 * (lo + hi);
    if (slope != 0.0) {
      const double newton = x - fx / slope;
      if (newton > lo && newton < hi) {
        if (std::fabs(newton - x) <= tol * std::max(1.0, std::fabs(x))) return newton;
        next = newton;
      }
    }
    x = next;
  }
  return x;
}

}  // namespace

double evaluate(std::span<const double> coeffs, double x) {
  double acc = 0.0;
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * x + *it;
  return acc;
}

std::vector<double> derivative(std::span<const double> coeffs) {
  if (coeffs.size() <= 1) return {};
  std::vector<double> d(coeffs.size() - 1);
  for (std::size_t i = 1; i < coeffs.size(); ++i) d[i - 1] = static_cast<double>(i) * coeffs[i];
  return d;
}

std::vector<double> real_roots_in(std::span<const double> coeffs, double lo, double hi,
                                  double tol) {
  const std::vector<double> c = Trimmed(coeffs);
  std::vector<double> roots;
  if (c.size() <= 1 || !(lo <= hi)) return roots;
  if (c.size() == 2) {
    const double r = -c[0] / c[1];
    if (r >= lo && r <= hi) roots.push_back(r);
    return roots;
  }

  const std::vector<double> dc = derivative(c);
  std::vector<double> knots{lo};
  for (double r : real_roots_in(dc, lo, hi, tol)) knots.push_back(r);
  knots.push_back(hi);

  constexpr double kRounding = 16.0 * std::numeric_limits<double>::epsilon();
  for (double k : knots) {
    if (std::fabs(evaluate(c, k)) <= kRounding * TermScale(c, k)) roots.push_back(k);
  }
  for (std::size_t i = 0; i + 1 < knots.size(); ++i) {
    const double u = knots[i];
    const double v = knots[i + 1];
    if (!(u < v)) continue;
    const double fu = evaluate(c, u);
    const double fv = evaluate(c, v);
    if ((fu < 0.0 && fv > 0.0) || (fu > 0.0 && fv < 0.0)) roots.push_back(Refine(c, dc, u, v, tol));
  }

  std::sort(roots.begin(), roots.end());
  std::vector<double> unique;
  for (double r : roots) {
    if (unique.empty() || std::fabs(r - unique.back()) > tol * std::max(1.0, std::fabs(r))) {
      unique.push_back(r);
    }
  }
  return unique;
}

std::vector<double> real_roots(std::span<const double> coeffs, double tol) {
  const std::vector<double> c = Trimmed(coeffs);
  if (c.size() <= 1) return {};
  double bound = 0.0;
  for (std::size_t i = 0; i + 1 < c.size(); ++i) bound = std::max(bound, std::fabs(c[i] / c.back()));
  bound += 1.0;
  return real_roots_in(c, -bound, bound, tol);
}

}  // namespace sharpstep::poly
