#include <algorithm>
#include <cmath>
#include <numeric>

#include "sharpstep/kernels.hpp"
#include "sharpstep/problems.hpp"

namespace sharpstep {
namespace {

double margin(const LogisticData& data, std::size_t i, ConstView z) {
  const std::size_t d = data.dim();
  return kernels::dot(data.features.row(i), z.first(d)) + z[d];
}

// log(1 + exp(t)) without overflow.
double softplus(double t) { return t > 0.0 ? t + std::log1p(std::exp(-t)) : std::log1p(std::exp(t)); }

double sigmoid(double t) {
  if (t >= 0.0) return 1.0 / (1.0 + std::exp(-t));
  const double e = std::exp(t);
  return e / (1.0 + e);
}

// Largest eigenvalue of [X 1]^T [X 1] / N by power iteration.
double smoothness(const LogisticData& data) {
  const std::size_t d = data.dim();
  const std::size_t n = data.size();
  Vector v(d + 1, 1.0 / std::sqrt(static_cast<double>(d + 1)));
  Vector next(d + 1);
  double eig = 0.0;
  for (int it = 0; it < 200; ++it) {
    std::fill(next.begin(), next.end(), 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      const double s = margin(data, i, v);
      kernels::axpy(s, data.features.row(i), MutView(next).first(d));
      next[d] += s;
    }
    for (double& e : next) e /= static_cast<double>(n);
    const double norm = std::sqrt(kernels::squared_norm(next));
    if (norm == 0.0) return 0.0;
    const double change = std::fabs(norm - eig);
    eig = norm;
    for (std::size_t j = 0; j <= d; ++j) v[j] = next[j] / norm;
    if (change <= 1e-10 * eig) break;
  }
  return eig;
}

// z - grad / L followed by shrinkage of the w block.
void prox_step(ConstView z, ConstView grad, double step, double tau, MutView out) {
  const std::size_t d = z.size() - 1;
  kernels::axpby(1.0, z, -step, grad, out);
  kernels::soft_threshold(out.first(d), step * tau, out.first(d));
}

}  // namespace

double logistic_sample_loss(const LogisticData& data, std::size_t i, ConstView z) {
  return softplus(-data.labels[i] * margin(data, i, z));
}

void logistic_sample_gradient(const LogisticData& data, std::size_t i, ConstView z,
                              MutView grad) {
  const std::size_t d = data.dim();
  const double y = data.labels[i];
  const double c = -y * sigmoid(-y * margin(data, i, z));
  kernels::axpby(c, data.features.row(i), 0.0, data.features.row(i), grad.first(d));
  grad[d] = c;
}

double logistic_objective(const LogisticData& data, double tau, ConstView z) {
  double total = 0.0;
  for (std::size_t i = 0; i < data.size(); ++i) total += logistic_sample_loss(data, i, z);
  double l1 = 0.0;
  for (std::size_t j = 0; j < data.dim(); ++j) l1 += std::fabs(z[j]);
  return total / static_cast<double>(data.size()) + tau * l1;
}

void logistic_gradient(const LogisticData& data, ConstView z, MutView grad) {
  const std::size_t d = data.dim();
  std::fill(grad.begin(), grad.end(), 0.0);
  for (std::size_t i = 0; i < data.size(); ++i) {
    const double y = data.labels[i];
    const double c = -y * sigmoid(-y * margin(data, i, z));
    kernels::axpy(c, data.features.row(i), grad.first(d));
    grad[d] += c;
  }
  for (double& g : grad) g /= static_cast<double>(data.size());
}

Vector solve_logistic(const LogisticData& data, double tau, double tolerance,
                      std::size_t max_iterations) {
  const std::size_t dim = data.dim() + 1;
  const double lipschitz = std::max(smoothness(data) / 4.0, 1e-12);
  const double step = 1.0 / lipschitz;

  Vector x(dim, 0.0), x_next(dim), y(dim, 0.0), grad(dim), mapped(dim);
  double t = 1.0;
  for (std::size_t it = 0; it < max_iterations; ++it) {
    logistic_gradient(data, y, grad);
    prox_step(y, grad, step, tau, x_next);

    // Gradient-restart test: momentum pointing uphill.
    double uphill = 0.0;
    for (std::size_t j = 0; j < dim; ++j) uphill += (y[j] - x_next[j]) * (x_next[j] - x[j]);
    const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
    const double beta = uphill > 0.0 ? 0.0 : (t - 1.0) / t_next;
    t = uphill > 0.0 ? 1.0 : t_next;
    for (std::size_t j = 0; j < dim; ++j) y[j] = x_next[j] + beta * (x_next[j] - x[j]);
    x.swap(x_next);

    if (it % 10 == 9) {
      logistic_gradient(data, x, grad);
      prox_step(x, grad, step, tau, mapped);
      const double gap = std::sqrt(kernels::squared_distance(x, mapped)) * lipschitz;
      if (gap <= tolerance) return mapped;
    }
  }
  return x;
}

LogisticInstance make_logistic_instance(LogisticData data, double tau) {
  if (!(tau > 0.0)) throw std::invalid_argument("tau must be positive");
  if (data.size() == 0) throw std::invalid_argument("logistic instance needs samples");
  LogisticInstance instance;
  instance.data = std::move(data);
  instance.tau = tau;
  instance.reference = solve_logistic(instance.data, tau);
  instance.reference_objective = logistic_objective(instance.data, tau, instance.reference);

  const std::size_t d = instance.data.dim();
  const double lipschitz = std::max(smoothness(instance.data) / 4.0, 1e-12);
  Vector grad(d + 1), mapped(d + 1);
  logistic_gradient(instance.data, instance.reference, grad);
  prox_step(instance.reference, grad, 1.0 / lipschitz, tau, mapped);
  instance.reference_gradient_map =
      std::sqrt(kernels::squared_distance(instance.reference, mapped)) * lipschitz;

  instance.in_support.resize(d);
  for (std::size_t j = 0; j < d; ++j)
    instance.in_support[j] = std::fabs(instance.reference[j]) > instance.support_tolerance;
  return instance;
}

LogisticInstance synth_logistic(std::size_t d, std::size_t n, std::size_t sparsity, double tau,
                                Stream& rng, double flip) {
  if (sparsity > d) throw std::invalid_argument("sparsity exceeds dimension");
  Stream planted = rng.child(0);
  Stream features = rng.child(1);
  Stream noise = rng.child(2);

  std::vector<std::size_t> order(d);
  std::iota(order.begin(), order.end(), 0);
  Vector wbar(d, 0.0);
  for (std::size_t k = 0; k < sparsity; ++k) {
    const std::size_t j = k + planted.index(d - k);
    std::swap(order[k], order[j]);
    wbar[order[k]] = planted.normal();
  }
  const double bbar = 0.1 * planted.normal();

  LogisticData data;
  data.features = Matrix(n, d);
  data.labels.resize(n);
  features.fill_normal(data.features.data);
  for (std::size_t i = 0; i < n; ++i) {
    const double s = kernels::dot(data.features.row(i), wbar) + bbar;
    double label = s >= 0.0 ? 1.0 : -1.0;
    if (noise.bernoulli(flip)) label = -label;
    data.labels[i] = label;
  }
  return make_logistic_instance(std::move(data), tau);
}

double dist_support(ConstView z, const LogisticInstance& instance) {
  double total = 0.0;
  for (std::size_t j = 0; j < instance.in_support.size(); ++j)
    if (!instance.in_support[j]) total += z[j] * z[j];
  return std::sqrt(total);
}

}  // namespace sharpstep
