#include "sharpstep/solvers.hpp"

#include <cmath>

#include "sharpstep/kernels.hpp"

namespace sharpstep {
namespace {

// Runs the K + 1 inner steps shared by mba and pmba.  `anchor_for` fills the
// anchor for the current iterate.
template <typename AnchorFn>
Vector inner_loop(ModelOracle& oracle, ConstView y0, std::uint64_t K, bool is_conv,
                  Stream& samples, Stream& select, RunContext* context, AnchorFn anchor_for) {
  const std::size_t n = y0.size();
  if (oracle.dimension() != n) throw std::invalid_argument("initial point has wrong dimension");
  RunContext local;
  RunContext& ctx = context ? *context : local;

  const std::uint64_t chosen = is_conv ? 0 : static_cast<std::uint64_t>(select.index(K + 1));
  Vector current(y0.begin(), y0.end());
  Vector next(n);
  Vector center(n);
  Vector output = is_conv ? Vector(n, 0.0) : current;

  for (std::uint64_t k = 0; k <= K; ++k) {
    const prox::QuadraticAnchor anchor = anchor_for(current, center);
    oracle.step(current, anchor, samples, next);
    current.swap(next);
    ++ctx.samples;
    if (is_conv) {
      kernels::axpy(1.0, current, output);
    } else if (k + 1 == chosen) {
      output = current;
    }
    if (ctx.observer != nullptr &&
        !ctx.observer->on_step({ctx.stage, ctx.copy, k + 1, ctx.samples, current})) {
      ctx.stopped = true;
      return current;
    }
  }
  if (is_conv) {
    const double scale = 1.0 / static_cast<double>(K + 1);
    for (double& v : output) v *= scale;
  }
  return output;
}

}  // namespace

Vector mba(ModelOracle& oracle, ConstView y0, double alpha, std::uint64_t K, bool is_conv,
           Stream& samples, Stream& select, RunContext* context) {
  if (!(alpha > 0.0)) throw std::invalid_argument("stepsize must be positive");
  const double weight = 1.0 / alpha;
  return inner_loop(oracle, y0, K, is_conv, samples, select, context,
                    [weight](const Vector& current, Vector&) {
                      return prox::QuadraticAnchor{weight, current};
                    });
}

Vector pmba(ModelOracle& oracle, ConstView y0, double rho, double alpha, std::uint64_t K,
            Stream& samples, Stream& select, RunContext* context) {
  if (!(alpha > 0.0)) throw std::invalid_argument("stepsize must be positive");
  if (!(rho >= 0.0)) throw std::invalid_argument("proximal weight must be nonnegative");
  if (rho == 0.0) return mba(oracle, y0, alpha, K, false, samples, select, context);
  return inner_loop(oracle, y0, K, false, samples, select, context,
                    [&](const Vector& current, Vector& center) {
                      const double weight = prox::compose_anchor(alpha, current, rho, y0, center);
                      return prox::QuadraticAnchor{weight, center};
                    });
}

namespace {

std::vector<std::size_t> neighbour_counts(const std::vector<Vector>& points, double eps) {
  const double radius = 2.0 * eps;
  std::vector<std::size_t> counts(points.size(), 0);
  for (std::size_t j = 0; j < points.size(); ++j)
    for (std::size_t i = 0; i < points.size(); ++i)
      counts[j] += std::sqrt(kernels::squared_distance(points[i], points[j])) <= radius;
  return counts;
}

}  // namespace

std::optional<std::size_t> ensemble_select(const std::vector<Vector>& points, double eps) {
  const EnsembleVote vote = ensemble_vote(points, eps);
  if (!vote.majority) return std::nullopt;
  return vote.index;
}

EnsembleVote ensemble_vote(const std::vector<Vector>& points, double eps) {
  if (points.empty()) throw std::invalid_argument("ensemble needs at least one point");
  if (!(eps > 0.0)) throw std::invalid_argument("ensemble tolerance must be positive");
  const auto counts = neighbour_counts(points, eps);
  EnsembleVote best;
  for (std::size_t j = 0; j < counts.size(); ++j) {
    if (2 * counts[j] > points.size()) return {j, counts[j], true};
    if (counts[j] > best.neighbors) best = {j, counts[j], false};
  }
  return best;
}

EnsembleResult epmba(ModelOracle& oracle, ConstView y0, double rho, double alpha,
                     std::uint64_t K, std::size_t m, double eps, const Stream& rng,
                     RunContext* context) {
  if (m == 0) throw std::invalid_argument("ensemble size must be positive");
  RunContext local;
  RunContext& ctx = context ? *context : local;
  std::vector<Vector> points;
  points.reserve(m);
  for (std::size_t j = 0; j < m; ++j) {
    Stream copy = rng.child(j);
    Stream samples = copy.child(StreamLabel::kSamples);
    Stream select = copy.child(StreamLabel::kSelect);
    ctx.copy = j;
    points.push_back(pmba(oracle, y0, rho, alpha, K, samples, select, &ctx));
    if (ctx.stopped) return {points.back(), {j, 0, false}};
  }
  ctx.copy = 0;
  EnsembleResult result;
  result.vote = ensemble_vote(points, eps);
  result.point = std::move(points[result.vote.index]);
  return result;
}

RunResult rmba(ModelOracle& oracle, ConstView x0, double alpha0, std::uint64_t K, int T,
               bool is_conv, const Stream& rng, Observer* observer) {
  if (T < 1) throw std::invalid_argument("at least one stage is required");
  Stream samples = rng.child(StreamLabel::kSamples);
  Stream select = rng.child(StreamLabel::kSelect);
  RunContext ctx;
  ctx.observer = observer;
  RunResult result;
  result.point.assign(x0.begin(), x0.end());
  for (int t = 0; t < T; ++t) {
    ctx.stage = t + 1;
    const double alpha = std::ldexp(alpha0, -t);
    result.point = mba(oracle, result.point, alpha, K, is_conv, samples, select, &ctx);
    if (ctx.stopped) break;
    StageRecord record;
    record.stage = t + 1;
    record.alpha = alpha;
    record.samples = ctx.samples;
    result.stages.push_back(record);
    if (observer != nullptr) observer->on_stage(record, result.point);
  }
  result.samples = ctx.samples;
  result.stopped = ctx.stopped;
  return result;
}

RunResult rpmba(ModelOracle& oracle, ConstView x0, double rho0, double alpha0, std::uint64_t K,
                double eps0, std::size_t M, int T, const Stream& rng, Observer* observer) {
  if (T < 1) throw std::invalid_argument("at least one stage is required");
  const Stream ensemble = rng.child(StreamLabel::kEnsemble);
  RunContext ctx;
  ctx.observer = observer;
  RunResult result;
  result.point.assign(x0.begin(), x0.end());
  for (int t = 0; t < T; ++t) {
    ctx.stage = t + 1;
    StageRecord record;
    record.stage = t + 1;
    record.rho = std::ldexp(rho0, t);
    record.alpha = std::ldexp(alpha0, -t);
    record.eps = std::ldexp(eps0, -t);
    EnsembleResult stage = epmba(oracle, result.point, record.rho, record.alpha, K, M, record.eps,
                                 ensemble.child(static_cast<std::uint64_t>(t + 1)), &ctx);
    result.point = std::move(stage.point);
    if (ctx.stopped) break;
    record.samples = ctx.samples;
    record.ensemble_failed = !stage.vote.majority;
    record.selected = stage.vote.index;
    record.neighbors = stage.vote.neighbors;
    result.stages.push_back(record);
    if (observer != nullptr) observer->on_stage(record, result.point);
  }
  result.samples = ctx.samples;
  result.stopped = ctx.stopped;
  return result;
}

}  // namespace sharpstep
