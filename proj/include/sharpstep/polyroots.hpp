#pragma once

#include <span>
#include <vector>

namespace sharpstep::poly {

// Coefficients are in ascending order: c[0] + c[1] x + ... + c[n] x^n.
double evaluate(std::span<const double> coeffs, double x);

std::vector<double> derivative(std::span<const double> coeffs);

// All real roots in [lo, hi], sorted and deduplicated.  Works by recursively
// isolating monotone pieces between roots of the derivative, then refining
// sign changes with safeguarded Newton/bisection to relative width `tol`.
// Critical points where |p| is at rounding level are reported as (even
// multiplicity) roots.
std::vector<double> real_roots_in(std::span<const double> coeffs, double lo, double hi,
                                  double tol = 1e-12);

// All real roots on the whole line (uses the Cauchy bound).
std::vector<double> real_roots(std::span<const double> coeffs, double tol = 1e-12);

}  // namespace sharpstep::poly
