#include "sharpstep/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <functional>
#include <limits>
#include <map>
#include <thread>

#include <fmt/format.h>

#include "sharpstep/baselines.hpp"
#include "sharpstep/kernels.hpp"
#include "sharpstep/oracle.hpp"

namespace sharpstep {
namespace {

using Clock = std::chrono::steady_clock;

// Runs fn(0..n-1) on a bounded pool; the first failure (by index) is rethrown.
template <typename Fn>
void parallel_for(std::size_t n, std::size_t threads, Fn&& fn) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min(threads, n);
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(n);
  auto worker = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < n;) {
      try {
        fn(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

double mean_of(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return v.empty() ? 0.0 : s / static_cast<double>(v.size());
}

// Sample standard deviation with the n - 1 denominator (0 for n < 2).
double std_of(const std::vector<double>& v) {
  if (v.size() < 2) return 0.0;
  const double m = mean_of(v);
  double s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return std::sqrt(s / static_cast<double>(v.size() - 1));
}

double norm_of(ConstView v) { return std::sqrt(kernels::squared_norm(v)); }

struct TrialSetup {
  std::unique_ptr<ModelOracle> oracle;
  std::function<double(ConstView)> dist;
  std::function<double(ConstView)> loss;
  Vector x0;
  SharpnessProfile profile;
  double r0 = 0.0;
};

std::size_t pool_size(const ExperimentConfig& c, std::size_t dim) {
  return c.m_samples ? c.m_samples : 8 * dim;
}

template <typename Item, typename LossFn>
std::function<double(ConstView)> mean_loss(std::shared_ptr<const std::vector<Item>> items,
                                           LossFn loss) {
  return [items, loss](ConstView x) {
    double total = 0.0;
    for (const auto& z : *items) total += loss(x, z);
    return total / static_cast<double>(items->size());
  };
}

TrialSetup prepare_trial(const ExperimentConfig& c, std::size_t trial) {
  const Stream root(c.seed, {trial});
  Stream instance_rng = root.child(StreamLabel::kInstance);
  Stream init_rng = root.child(StreamLabel::kInit);
  Stream pool_rng = root.child(StreamLabel::kPool);
  Stream eval_rng = root.child(StreamLabel::kEval);
  const Model model = parse_model(c.model);
  const bool finite = c.mode == "finite";
  TrialSetup setup;

  if (c.problem == "phase") {
    PhaseInstance raw = make_phase_instance(c.d, c.pfail, instance_rng);
    raw.noise_variance = c.noise_variance;
    auto instance = std::make_shared<const PhaseInstance>(std::move(raw));
    setup.profile = phase_constants(*instance);
    setup.r0 = c.r0 * norm_of(instance->signal);
    setup.x0 = random_init(*instance, setup.r0, init_rng);
    std::shared_ptr<const std::vector<PhaseMeasurement>> measurements;
    if (finite) {
      measurements = std::make_shared<const std::vector<PhaseMeasurement>>(
          make_phase_pool(*instance, pool_size(c, c.d), pool_rng));
      setup.oracle = make_phase_oracle(instance, model, measurements);
    } else {
      auto batch = std::make_shared<std::vector<PhaseMeasurement>>(std::max<std::size_t>(1, c.eval_samples));
      for (auto& z : *batch) sample_phase(*instance, eval_rng, z);
      measurements = batch;
      setup.oracle = make_phase_oracle(instance, model);
    }
    setup.loss = mean_loss(measurements, [](ConstView x, const PhaseMeasurement& z) {
      return phase_loss(x, z);
    });
    setup.dist = [instance](ConstView x) { return dist_phase(x, *instance); };
    return setup;
  }

  if (c.problem == "blind") {
    const std::size_t d2 = c.d2 ? c.d2 : c.d;
    BlindInstance raw = make_blind_instance(c.d, d2, c.pfail, c.nu, instance_rng);
    raw.noise_variance = c.noise_variance;
    auto instance = std::make_shared<const BlindInstance>(std::move(raw));
    setup.profile = blind_constants(*instance);
    setup.r0 = c.r0 * std::sqrt(kernels::squared_norm(instance->left_signal) +
                                kernels::squared_norm(instance->right_signal));
    setup.x0 = random_init(*instance, setup.r0, init_rng);
    std::shared_ptr<const std::vector<BlindMeasurement>> measurements;
    if (finite) {
      measurements = std::make_shared<const std::vector<BlindMeasurement>>(
          make_blind_pool(*instance, pool_size(c, c.d + d2), pool_rng));
      setup.oracle = make_blind_oracle(instance, model, measurements);
    } else {
      auto batch = std::make_shared<std::vector<BlindMeasurement>>(std::max<std::size_t>(1, c.eval_samples));
      for (auto& z : *batch) sample_blind(*instance, eval_rng, z);
      measurements = batch;
      setup.oracle = make_blind_oracle(instance, model);
    }
    setup.loss = mean_loss(measurements, [](ConstView x, const BlindMeasurement& z) {
      return blind_loss(x, z);
    });
    setup.dist = [instance](ConstView x) { return dist_blind(x, *instance); };
    return setup;
  }

  throw std::invalid_argument(
      fmt::format("problem '{}' is not supported by this experiment", c.problem));
}

Schedule resolve_schedule(const ExperimentConfig& c, const SharpnessProfile& p, double r0) {
  Schedule s;
  if (c.algorithm == "rpmba") {
    s = schedule_highprob(r0, c.eps, c.delta_prime, c.gamma, p.mu, p.eta, p.lipschitz);
  } else if (c.algorithm == "rmba") {
    s = schedule_nonconvex(r0, c.eps, c.delta2, c.gamma, p.mu, p.eta, p.lipschitz);
  } else {
    throw std::invalid_argument(
        fmt::format("algorithm '{}' is not available for this experiment", c.algorithm));
  }
  const bool overridden = c.k_override || c.m_override || c.t_override;
  if (c.t_override) s.T = c.t_override;
  if (c.m_override) s.M = c.m_override;
  if (c.k_override) {
    s.K = c.k_override;
    s.alpha0 = std::sqrt(r0 * r0 / (p.lipschitz * p.lipschitz * (static_cast<double>(s.K) + 1.0)));
  }
  if (overridden) s.sample_bound = static_cast<double>(s.T) * static_cast<double>(s.K + 1) *
                                   static_cast<double>(s.M);
  s.alpha0 *= std::exp2(c.alpha_exponent);
  return s;
}

// Convergence runs default to the full planned schedule; sensitivity sweeps
// cap at the stated sample bound.
std::uint64_t resolve_cap(const ExperimentConfig& c, const Schedule& s, bool at_bound) {
  if (c.sample_cap) return c.sample_cap;
  if (at_bound) return static_cast<std::uint64_t>(std::floor(s.sample_bound));
  return static_cast<std::uint64_t>(s.T) * (s.K + 1) * s.M;
}

class TrialObserver final : public Observer {
 public:
  TrialObserver(const TrialSetup& setup, const ExperimentConfig& config, const Schedule& schedule,
                std::uint64_t cap, TrialOutcome& outcome)
      : setup_(setup),
        target_(config.eps),
        stop_dist_(config.stop_dist),
        cap_(cap < static_cast<std::uint64_t>(schedule.T) * (schedule.K + 1) * schedule.M
                 ? cap
                 : std::numeric_limits<std::uint64_t>::max()),
        cadence_(std::max<std::uint64_t>(1, (schedule.K + 1 + config.checkpoints - 1) / config.checkpoints)),
        last_inner_(schedule.K + 1),
        outcome_(outcome),
        start_(Clock::now()) {}

  bool on_step(const StepInfo& info) override {
    double dist = -1.0;
    const bool need_dist = outcome_.samples_to_target < 0 || stop_dist_ > 0.0;
    if (need_dist) {
      dist = setup_.dist(info.iterate);
      if (outcome_.samples_to_target < 0 && dist <= target_)
        outcome_.samples_to_target = static_cast<std::int64_t>(info.samples);
    }
    const bool stop = (stop_dist_ > 0.0 && dist <= stop_dist_) || info.samples >= cap_;
    if (info.copy == 0 && (info.inner % cadence_ == 0 || info.inner == last_inner_ || stop)) {
      if (dist < 0.0) dist = setup_.dist(info.iterate);
      record(info.stage, info.inner, info.samples, dist, info.iterate);
    }
    return !stop;
  }

  void on_stage(const StageRecord& record, ConstView output) override {
    outcome_.stages.push_back(record);
    outcome_.stage_dist.push_back(setup_.dist(output));
  }

 private:
  void record(int stage, std::uint64_t inner, std::uint64_t samples, double dist, ConstView x) {
    const double ms = std::chrono::duration<double, std::milli>(Clock::now() - start_).count();
    outcome_.rows.push_back({stage, inner, samples, dist, setup_.loss(x), ms});
  }

  const TrialSetup& setup_;
  double target_;
  double stop_dist_;
  std::uint64_t cap_;  // only binds when it cuts the planned schedule short
  std::uint64_t cadence_;
  std::uint64_t last_inner_;
  TrialOutcome& outcome_;
  Clock::time_point start_;
};

TrialOutcome run_trial(const ExperimentConfig& c, const Schedule& s, std::uint64_t cap,
                       std::size_t trial) {
  TrialSetup setup = prepare_trial(c, trial);
  const Stream root(c.seed, {trial});
  TrialOutcome outcome;
  outcome.initial_dist = setup.dist(setup.x0);
  TrialObserver observer(setup, c, s, cap, outcome);
  RunResult run;
  if (c.algorithm == "rpmba") {
    run = rpmba(*setup.oracle, setup.x0, s.rho0, s.alpha0, s.K, s.eps0, s.M, s.T, root, &observer);
  } else {
    run = rmba(*setup.oracle, setup.x0, s.alpha0, s.K, s.T, c.is_conv, root, &observer);
  }
  outcome.final_dist = setup.dist(run.point);
  outcome.samples = run.samples;
  outcome.stopped = run.stopped;
  return outcome;
}

std::vector<std::pair<std::string, Cell>> schedule_meta(const ExperimentConfig& c,
                                                        const Schedule& s,
                                                        const SharpnessProfile& p,
                                                        std::uint64_t cap) {
  auto count = [](auto v) { return Cell(static_cast<std::int64_t>(v)); };
  return {
      {"kind", s.kind},
      {"T", count(s.T)},
      {"K", count(s.K)},
      {"M", count(s.M)},
      {"alpha0", s.alpha0},
      {"rho0", s.rho0},
      {"eps0", s.eps0},
      {"delta", s.delta},
      {"gamma", s.gamma},
      {"r0", s.r0},
      {"eps", s.eps},
      {"success_probability", s.success_probability},
      {"sample_bound", s.sample_bound},
      {"sample_cap", count(cap)},
      {"mu", p.mu},
      {"eta", p.eta},
      {"lipschitz", p.lipschitz},
      {"problem", c.problem},
      {"model", c.model},
      {"algorithm", c.algorithm},
      {"d", count(c.d)},
      {"pfail", c.pfail},
      {"mode", c.mode},
      {"trials", count(c.trials)},
      {"seed", count(c.seed)},
  };
}

struct TrialBatch {
  Schedule schedule;
  SharpnessProfile profile;
  double r0 = 0.0;
  std::uint64_t cap = 0;
  std::vector<TrialOutcome> trials;
};

TrialBatch run_batch(const ExperimentConfig& c, bool cap_at_bound) {
  validate(c);
  TrialBatch batch;
  {
    // Constants are fixed by the measurement law and the normalized signal,
    // so the first trial's instance determines the schedule for all.
    const TrialSetup probe = prepare_trial(c, 0);
    batch.profile = probe.profile;
    batch.r0 = probe.r0;
  }
  batch.schedule = resolve_schedule(c, batch.profile, batch.r0);
  batch.cap = resolve_cap(c, batch.schedule, cap_at_bound);
  batch.trials.resize(c.trials);
  parallel_for(c.trials, c.threads, [&](std::size_t t) {
    batch.trials[t] = run_trial(c, batch.schedule, batch.cap, t);
  });
  return batch;
}

}  // namespace

ConvergenceResult run_convergence(const ExperimentConfig& config) {
  TrialBatch batch = run_batch(config, false);
  ConvergenceResult result;
  result.schedule = batch.schedule;
  result.profile = batch.profile;
  result.r0 = batch.r0;
  result.sample_cap = batch.cap;
  result.trials = std::move(batch.trials);
  const auto meta = schedule_meta(config, result.schedule, result.profile, result.sample_cap);
  const Schedule& s = result.schedule;

  result.trace.columns = {"trial", "stage", "inner_iter", "samples", "dist", "loss", "wall_ms"};
  result.trace.meta = meta;
  for (std::size_t t = 0; t < result.trials.size(); ++t)
    for (const auto& r : result.trials[t].rows)
      result.trace.add_row({static_cast<std::int64_t>(t), static_cast<std::int64_t>(r.stage),
                            static_cast<std::int64_t>(r.inner), static_cast<std::int64_t>(r.samples),
                            r.dist, r.loss, r.wall_ms});

  result.reference.columns = {"stage", "samples", "dist"};
  result.reference.meta = meta;
  for (int stage = 0; stage <= s.T; ++stage) {
    const auto planned = static_cast<std::int64_t>(stage) * static_cast<std::int64_t>(s.K + 1) *
                         static_cast<std::int64_t>(s.M);
    result.reference.add_row({static_cast<std::int64_t>(stage), planned, std::ldexp(result.r0, -stage)});
  }

  struct Accumulator {
    std::uint64_t samples = 0;
    std::vector<double> logs;
  };
  std::map<std::pair<int, std::uint64_t>, Accumulator> checkpoints;
  for (const auto& trial : result.trials)
    for (const auto& r : trial.rows) {
      auto& acc = checkpoints[{r.stage, r.inner}];
      if (acc.logs.empty()) acc.samples = r.samples;
      acc.logs.push_back(std::log10(std::max(r.dist, 1e-300)));
    }
  result.aggregate.columns = {"stage", "inner_iter", "samples", "n", "mean_log10_dist",
                              "std_log10_dist"};
  result.aggregate.meta = meta;
  for (const auto& [key, acc] : checkpoints)
    result.aggregate.add_row({static_cast<std::int64_t>(key.first),
                              static_cast<std::int64_t>(key.second),
                              static_cast<std::int64_t>(acc.samples),
                              static_cast<std::int64_t>(acc.logs.size()), mean_of(acc.logs),
                              std_of(acc.logs)});

  result.summary.columns = {"trial", "initial_dist", "final_dist", "samples_to_target", "samples",
                            "stages_completed", "stages_halved", "ensemble_failures"};
  result.summary.meta = meta;
  for (std::size_t t = 0; t < result.trials.size(); ++t) {
    const auto& trial = result.trials[t];
    std::int64_t halved = 0;
    for (std::size_t k = 0; k < trial.stage_dist.size(); ++k) {
      if (trial.stage_dist[k] > std::ldexp(result.r0, -static_cast<int>(k + 1))) break;
      ++halved;
    }
    std::int64_t failures = 0;
    for (const auto& st : trial.stages) failures += st.ensemble_failed;
    result.summary.add_row({static_cast<std::int64_t>(t), trial.initial_dist, trial.final_dist,
                            trial.samples_to_target, static_cast<std::int64_t>(trial.samples),
                            static_cast<std::int64_t>(trial.stage_dist.size()), halved, failures});
  }
  return result;
}

SensitivityResult run_stepsize_sensitivity(const ExperimentConfig& config) {
  validate(config);
  SensitivityResult result;
  result.table.columns = {"model", "p", "mean_iters", "std_iters", "mean_final_dist",
                          "std_final_dist"};
  for (int p = config.p_min; p <= config.p_max; ++p) {
    ExperimentConfig scaled = config;
    scaled.alpha_exponent = config.alpha_exponent + p;
    TrialBatch batch = run_batch(scaled, true);
    if (p == config.p_min) {
      // Echo the unscaled schedule.
      result.schedule = batch.schedule;
      result.schedule.alpha0 = std::ldexp(batch.schedule.alpha0, -p);
      result.sample_cap = batch.cap;
      result.table.meta = schedule_meta(config, result.schedule, batch.profile, batch.cap);
    }
    std::vector<double> iters, finals;
    for (const auto& trial : batch.trials) {
      iters.push_back(trial.samples_to_target >= 0 ? static_cast<double>(trial.samples_to_target)
                                                   : static_cast<double>(batch.cap));
      finals.push_back(trial.final_dist);
    }
    SensitivityRow row{p, mean_of(iters), std_of(iters), mean_of(finals), std_of(finals)};
    result.rows.push_back(row);
    result.table.add_row({config.model, static_cast<std::int64_t>(p), row.mean_iters,
                          row.std_iters, row.mean_final_dist, row.std_final_dist});
  }
  return result;
}

namespace {

struct IdentificationContext {
  const LogisticInstance& instance;
  double threshold;
  std::uint64_t cadence;
  std::uint64_t cap;
  Table& table;

  double gap(ConstView z) const {
    return logistic_objective(instance.data, instance.tau, z) - instance.reference_objective;
  }
  std::vector<Cell> row(const std::string& method, std::uint64_t iter, ConstView z,
                        double dist_support) const {
    const double to_reference = std::sqrt(kernels::squared_distance(z, instance.reference));
    return {method, static_cast<std::int64_t>(iter), gap(z), dist_support, to_reference};
  }
};

// Per-iteration bookkeeping shared by the three methods.  Identification is
// the start of the final streak of iterates with dist_support <= threshold,
// i.e. the iteration from which the support stays identified.
struct IdentificationTracker {
  const IdentificationContext& ctx;
  MethodSummary& summary;
  std::optional<std::uint64_t> probe_iter;
  std::vector<std::vector<Cell>> rows{};
  std::optional<std::uint64_t> streak_start{};
  Vector streak_point{};
  double streak_dist = 0.0;

  // Returns false once the iteration budget is spent.
  bool observe(std::uint64_t iter, ConstView z) {
    const double ds = dist_support(z, ctx.instance);
    if (ds <= ctx.threshold) {
      if (!streak_start) {
        streak_start = iter;
        streak_point.assign(z.begin(), z.end());
        streak_dist = ds;
      }
    } else {
      streak_start.reset();
    }
    if (probe_iter && iter == *probe_iter) summary.dist_support_at_reference_iter = ds;
    summary.iterations = iter;
    summary.final_dist_support = ds;
    const bool last = iter >= ctx.cap;
    if (iter % ctx.cadence == 0 || last) rows.push_back(ctx.row(summary.method, iter, z, ds));
    if (last) summary.final_fval_gap = ctx.gap(z);
    return !last;
  }

  void finish() {
    summary.stays_identified = streak_start.has_value();
    if (streak_start) {
      summary.first_identified = streak_start;
      summary.fval_gap_at_identification = ctx.gap(streak_point);
      if (*streak_start % ctx.cadence != 0 && *streak_start != summary.iterations)
        rows.push_back(ctx.row(summary.method, *streak_start, streak_point, streak_dist));
    }
    std::stable_sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) {
      return std::get<std::int64_t>(a[1]) < std::get<std::int64_t>(b[1]);
    });
    for (auto& r : rows) ctx.table.add_row(std::move(r));
  }
};

class RmbaIdentificationObserver final : public Observer {
 public:
  explicit RmbaIdentificationObserver(IdentificationTracker& tracker) : tracker_(tracker) {}
  bool on_step(const StepInfo& info) override { return tracker_.observe(info.samples, info.iterate); }

 private:
  IdentificationTracker& tracker_;
};

}  // namespace

IdentificationResult run_identification(const ExperimentConfig& config, double threshold) {
  validate(config);
  const Stream root(config.seed);
  LogisticInstance built;
  if (!config.idx_images.empty() || !config.idx_labels.empty()) {
    built = make_logistic_instance(
        load_idx(config.idx_images, config.idx_labels, config.digit_positive, config.digit_negative),
        config.tau);
  } else {
    Stream instance_rng = root.child(StreamLabel::kInstance);
    built = synth_logistic(config.d, config.logistic_n, config.sparsity, config.tau, instance_rng);
  }
  auto instance = std::make_shared<const LogisticInstance>(std::move(built));
  const std::size_t dim = instance->data.dim() + 1;

  IdentificationResult result;
  result.threshold = threshold;
  result.reference_objective = instance->reference_objective;
  for (auto s : instance->in_support) result.support_size += s;
  result.profile = logistic_constants(*instance, config.mu_exponent);
  const double r0 = norm_of(instance->reference);
  if (!(r0 > 0.0)) throw ScheduleError("reference solution is zero; nothing to identify");
  result.schedule = schedule_nonconvex(r0, config.eps, config.delta2, config.gamma,
                                       result.profile.mu, result.profile.eta,
                                       result.profile.lipschitz);
  Schedule& s = result.schedule;
  if (config.t_override) s.T = config.t_override;
  if (config.k_override) {
    s.K = config.k_override;
    s.alpha0 = std::sqrt(r0 * r0 / (result.profile.lipschitz * result.profile.lipschitz *
                                    (static_cast<double>(s.K) + 1.0)));
  }
  s.alpha0 *= std::exp2(config.alpha_exponent);
  const std::uint64_t planned = static_cast<std::uint64_t>(s.T) * (s.K + 1);
  const std::uint64_t cap = config.sample_cap ? std::min(config.sample_cap, planned) : planned;

  result.table.columns = {"method", "iter", "fval_gap", "dist_support", "dist_to_reference"};
  result.table.meta = schedule_meta(config, s, result.profile, cap);
  result.table.meta.emplace_back("tau", instance->tau);
  result.table.meta.emplace_back("support_size", static_cast<std::int64_t>(result.support_size));
  result.table.meta.emplace_back("reference_objective", instance->reference_objective);

  const std::uint64_t cadence =
      std::max<std::uint64_t>(1, (s.K + 1 + config.checkpoints - 1) / config.checkpoints);
  IdentificationContext ctx{*instance, threshold, cadence, cap, result.table};

  // RMBA with the stochastic proximal-gradient model.
  result.rmba.method = "rmba";
  {
    auto oracle = make_logistic_oracle(instance);
    IdentificationTracker tracker{ctx, result.rmba, std::nullopt};
    RmbaIdentificationObserver observer(tracker);
    const Vector z0(dim, 0.0);
    rmba(*oracle, z0, s.alpha0, s.K, s.T, config.is_conv, root, &observer);
    tracker.finish();
  }
  const std::uint64_t iterations = result.rmba.iterations;
  const std::optional<std::uint64_t> probe =
      result.rmba.first_identified ? result.rmba.first_identified : std::optional(iterations);
  IdentificationContext baseline_ctx{*instance, threshold, cadence, iterations, result.table};

  // RDA: gamma from the grid by final objective gap, then the recorded run.
  {
    double best_gap = std::numeric_limits<double>::infinity();
    for (double gamma : config.rda_gammas) {
      Stream samples = root.child(StreamLabel::kSamples);
      const Vector z = run_rda(*instance, gamma, iterations, samples);
      const double gap = baseline_ctx.gap(z);
      if (gap < best_gap) {
        best_gap = gap;
        result.rda_gamma = gamma;
      }
    }
    result.table.meta.emplace_back("rda_gamma", result.rda_gamma);
    result.rda.method = "rda";
    IdentificationTracker tracker{baseline_ctx, result.rda, probe};
    Stream samples = root.child(StreamLabel::kSamples);
    run_rda(*instance, result.rda_gamma, iterations, samples,
            [&](std::uint64_t k, ConstView z, double) { return tracker.observe(k, z); });
    tracker.finish();
  }

  // Polynomially decaying stochastic proximal gradient.
  {
    result.poly.method = "proxgrad-poly";
    IdentificationTracker tracker{baseline_ctx, result.poly, probe};
    Stream samples = root.child(StreamLabel::kSamples);
    const Vector z0(dim, 0.0);
    prox_grad_poly(*instance, config.poly_c, config.poly_p, iterations, samples, z0,
                   [&](std::uint64_t k, ConstView z, double) { return tracker.observe(k, z); });
    tracker.finish();
  }
  return result;
}

std::string output_path(const ExperimentConfig& config, const std::string& suffix) {
  if (suffix.empty()) return config.out;
  const std::string ext = config.format == "json" ? ".json" : ".csv";
  std::string stem = config.out;
  const auto slash = stem.find_last_of('/');
  const auto dot = stem.find_last_of('.');
  if (dot != std::string::npos && (slash == std::string::npos || dot > slash)) stem.resize(dot);
  return stem + "_" + suffix + ext;
}

void write_convergence(const ConvergenceResult& result, const ExperimentConfig& config) {
  const Format format = parse_format(config.format);
  write_table(result.trace, format, output_path(config, ""));
  write_table(result.reference, format, output_path(config, "reference"));
  write_table(result.aggregate, format, output_path(config, "aggregate"));
  write_table(result.summary, format, output_path(config, "trials"));
}

void write_sensitivity(const SensitivityResult& result, const ExperimentConfig& config) {
  write_table(result.table, parse_format(config.format), output_path(config, ""));
}

void write_identification(const IdentificationResult& result, const ExperimentConfig& config) {
  write_table(result.table, parse_format(config.format), output_path(config, ""));
}

}  // namespace sharpstep
