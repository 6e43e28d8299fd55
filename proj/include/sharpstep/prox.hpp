#pragma once

// Exact minimizers of the regularized model subproblems
//
//     minimize_u  model(u) + (lambda / 2) * ||u - w||^2
//
// for the model families used by the stochastic model-based methods.  All
// functions are pure and write into caller-owned storage so the inner loops
// stay allocation free.

#include "sharpstep/types.hpp"

namespace sharpstep::prox {

// u -> |offset + <slope, u - w>|, offset taken at the anchor center w.
struct AffineAbsModel {
  double offset = 0.0;
  ConstView slope;
};

// u -> |(<direction, u>)^2 - target|
struct QuadraticAbsModel {
  ConstView direction;
  double target = 0.0;
};

// (x, y) -> |<left, x> <right, y> - target|
struct BilinearAbsModel {
  ConstView left;
  ConstView right;
  double target = 0.0;
};

// (weight / 2) * ||u - center||^2
struct QuadraticAnchor {
  double weight = 1.0;
  ConstView center;
};

// Value at `center` of the affine function that equals `offset` at `basepoint`
// with gradient `slope`: offset + <slope, center - basepoint>.
double rebase_offset(double offset, ConstView slope, ConstView basepoint, ConstView center);

// Merges (1 / 2 alpha) ||y - current||^2 + (rho / 2) ||y - origin||^2 into a
// single anchor.  Writes the center and returns the weight 1/alpha + rho.
double compose_anchor(double alpha, ConstView current, double rho, ConstView origin,
                      MutView center);

// u = w - slope / lambda.  Step for the (unclipped) subgradient model.
void linear_prox(ConstView slope, const QuadraticAnchor& anchor, MutView out);

// u* = w - sign(c) min(1/lambda, |c| / ||g||^2) g, or w when g = 0.
void affine_abs_prox(const AffineAbsModel& model, const QuadraticAnchor& anchor, MutView out);

// Minimizer of max{c + <g, u - w>, lower_bound} + anchor.  Only lower_bound = 0
// is meaningful for the losses here; the offset is shifted accordingly.
void clipped_affine_abs_prox(const AffineAbsModel& model, double lower_bound,
                             const QuadraticAnchor& anchor, MutView out);

// Global minimizer of |(a^T u)^2 - b| + anchor via the scalar reduction
// v = a^T u and candidate enumeration.
void quadratic_abs_prox(const QuadraticAbsModel& model, const QuadraticAnchor& anchor,
                        MutView out);

struct BilinearProxInfo {
  // The boundary quartic produced no usable root and a bracketed scan was used.
  bool scan_fallback = false;
};

// Global minimizer of |<l, x><r, y> - b| + anchor_x(x) + anchor_y(y).
BilinearProxInfo bilinear_abs_prox(const BilinearAbsModel& model, const QuadraticAnchor& anchor_x,
                                   const QuadraticAnchor& anchor_y, MutView out_x, MutView out_y);

void soft_threshold(ConstView v, double theta, MutView out);
Vector soft_threshold(ConstView v, double theta);

}  // namespace sharpstep::prox
