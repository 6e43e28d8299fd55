#include <cmath>
#include <stdexcept>
#include <string>

#include "sharpstep/kernels.hpp"
#include "sharpstep/problems.hpp"

namespace sharpstep {
namespace {

double sign_of(double v) { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); }

[[noreturn]] void unsupported(Problem problem, Model model) {
  throw std::invalid_argument(std::string("model '") + std::string(to_string(model)) +
                              "' is not available for problem '" +
                              std::string(to_string(problem)) + "'");
}

// Shared by the two composite losses |c(x, z)| with c smooth: given the
// residual c and the gradient of c in `out.slope`, fill in the requested
// model.
void composite_model(Model model, double residual, ModelBuffer& out) {
  out.loss = std::fabs(residual);
  const double s = sign_of(residual);
  switch (model) {
    case Model::kSubgradient:
      out.form = ModelForm::kLinear;
      out.offset = out.loss;
      for (double& g : out.slope) g = s * g;
      break;
    case Model::kProxLinear:
      out.form = ModelForm::kAffineAbs;
      out.offset = residual;
      break;
    case Model::kClipped:
      out.form = ModelForm::kClippedAffine;
      out.offset = out.loss;
      for (double& g : out.slope) g = s * g;
      break;
    default:
      break;
  }
}

}  // namespace

Problem parse_problem(std::string_view tag) {
  if (tag == "phase") return Problem::kPhase;
  if (tag == "blind") return Problem::kBlind;
  if (tag == "logistic") return Problem::kLogistic;
  throw std::invalid_argument("unknown problem '" + std::string(tag) + "'");
}

Model parse_model(std::string_view tag) {
  if (tag == "subgradient") return Model::kSubgradient;
  if (tag == "clipped") return Model::kClipped;
  if (tag == "proxlinear") return Model::kProxLinear;
  if (tag == "proxpoint") return Model::kProxPoint;
  if (tag == "proxgrad") return Model::kProxGradient;
  throw std::invalid_argument("unknown model '" + std::string(tag) + "'");
}

std::string_view to_string(Problem problem) {
  switch (problem) {
    case Problem::kPhase: return "phase";
    case Problem::kBlind: return "blind";
    case Problem::kLogistic: return "logistic";
  }
  return "?";
}

std::string_view to_string(Model model) {
  switch (model) {
    case Model::kSubgradient: return "subgradient";
    case Model::kClipped: return "clipped";
    case Model::kProxLinear: return "proxlinear";
    case Model::kProxPoint: return "proxpoint";
    case Model::kProxGradient: return "proxgrad";
  }
  return "?";
}

void build_model(Model model, ConstView point, const PhaseMeasurement& z, ModelBuffer& out) {
  if (z.a.size() != point.size()) throw std::invalid_argument("phase measurement size mismatch");
  if (model == Model::kProxGradient) unsupported(Problem::kPhase, model);
  out.slope.resize(point.size());
  const double v = kernels::dot(z.a, point);
  const double residual = v * v - z.b;
  if (model == Model::kProxPoint) {
    out.form = ModelForm::kQuadraticAbs;
    out.loss = std::fabs(residual);
    out.offset = out.loss;
    out.quadratic = {z.a, z.b};
    return;
  }
  kernels::axpby(2.0 * v, z.a, 0.0, z.a, out.slope);
  composite_model(model, residual, out);
}

void build_model(Model model, ConstView point, const BlindMeasurement& z, ModelBuffer& out) {
  const std::size_t d1 = z.left.size();
  if (d1 + z.right.size() != point.size())
    throw std::invalid_argument("blind measurement size mismatch");
  if (model == Model::kProxGradient) unsupported(Problem::kBlind, model);
  out.slope.resize(point.size());
  const double p = kernels::dot(z.left, point.first(d1));
  const double q = kernels::dot(z.right, point.subspan(d1));
  const double residual = p * q - z.b;
  if (model == Model::kProxPoint) {
    out.form = ModelForm::kBilinearAbs;
    out.loss = std::fabs(residual);
    out.offset = out.loss;
    out.bilinear = {z.left, z.right, z.b};
    return;
  }
  MutView slope = out.slope;
  kernels::axpby(q, z.left, 0.0, z.left, slope.first(d1));
  kernels::axpby(p, z.right, 0.0, z.right, slope.subspan(d1));
  composite_model(model, residual, out);
}

void build_model(Model model, ConstView point, std::size_t index,
                 const LogisticInstance& instance, ModelBuffer& out) {
  if (model != Model::kProxGradient) unsupported(Problem::kLogistic, model);
  if (point.size() != instance.data.dim() + 1 || index >= instance.data.size())
    throw std::invalid_argument("logistic point or sample index out of range");
  out.slope.resize(point.size());
  out.form = ModelForm::kProxGradient;
  out.loss = logistic_sample_loss(instance.data, index, point);
  out.offset = out.loss;
  out.tau = instance.tau;
  logistic_sample_gradient(instance.data, index, point, out.slope);
}

void build_model(Problem problem, Model model, ConstView point, const Measurement& z,
                 ModelBuffer& out, const LogisticInstance* logistic) {
  switch (problem) {
    case Problem::kPhase:
      if (const auto* m = std::get_if<PhaseMeasurement>(&z)) return build_model(model, point, *m, out);
      break;
    case Problem::kBlind:
      if (const auto* m = std::get_if<BlindMeasurement>(&z)) return build_model(model, point, *m, out);
      break;
    case Problem::kLogistic:
      if (const auto* i = std::get_if<std::size_t>(&z); i && logistic)
        return build_model(model, point, *i, *logistic, out);
      break;
  }
  throw std::invalid_argument("measurement does not match problem '" +
                              std::string(to_string(problem)) + "'");
}

}  // namespace sharpstep
