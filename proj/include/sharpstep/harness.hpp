#pragma once

// Experiment drivers behind the command-line tool: multi-trial convergence,
// step-size sensitivity and activity identification.  Every trial draws from
// Stream(seed, {trial}); trials run on a bounded worker pool and are merged
// by index, so results do not depend on the thread count.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sharpstep/config.hpp"
#include "sharpstep/emit.hpp"
#include "sharpstep/problems.hpp"
#include "sharpstep/solvers.hpp"

namespace sharpstep {

struct TraceRow {
  int stage = 0;
  std::uint64_t inner = 0;
  std::uint64_t samples = 0;
  double dist = 0.0;
  double loss = 0.0;
  double wall_ms = 0.0;
};

struct TrialOutcome {
  std::vector<double> stage_dist;  // dist(x_s) for each completed stage s = 1, 2, ...
  std::vector<StageRecord> stages;
  double initial_dist = 0.0;
  double final_dist = 0.0;
  std::int64_t samples_to_target = -1;  // first cumulative sample count with dist <= eps
  std::uint64_t samples = 0;
  bool stopped = false;
  std::vector<TraceRow> rows;
};

struct ConvergenceResult {
  Schedule schedule;
  SharpnessProfile profile;
  double r0 = 0.0;  // absolute initial radius
  std::uint64_t sample_cap = 0;
  std::vector<TrialOutcome> trials;

  Table trace;      // trial, stage, inner_iter, samples, dist, loss, wall_ms
  Table reference;  // stage, samples, dist = 2^-stage r0
  Table aggregate;  // per checkpoint: mean / std of log10 dist over trials
  Table summary;    // per trial: final_dist, samples_to_target, ...
};

// Throws ScheduleError when the schedule cannot be formed.
ConvergenceResult run_convergence(const ExperimentConfig& config);

struct SensitivityRow {
  int p = 0;
  double mean_iters = 0.0;
  double std_iters = 0.0;
  double mean_final_dist = 0.0;
  double std_final_dist = 0.0;
};

struct SensitivityResult {
  Schedule schedule;
  std::uint64_t sample_cap = 0;
  std::vector<SensitivityRow> rows;
  Table table;  // model, p, mean_iters, std_iters, mean_final_dist, std_final_dist
};

// For each integer p in [p_min, p_max], alpha0 is scaled by 2^p and
// config.trials runs are made.  Samples to reach eps count as the cap when
// the target is never reached.
SensitivityResult run_stepsize_sensitivity(const ExperimentConfig& config);

struct MethodSummary {
  std::string method;
  // Start of the final streak with dist_support <= threshold: the iteration
  // from which the support stays identified until the end of the run.
  std::optional<std::uint64_t> first_identified;
  bool stays_identified = false;  // the last iterate is identified
  double fval_gap_at_identification = 0.0;
  double dist_support_at_reference_iter = 0.0;  // at the RMBA identification iteration
  double final_fval_gap = 0.0;
  double final_dist_support = 0.0;
  std::uint64_t iterations = 0;
};

struct IdentificationResult {
  Schedule schedule;
  SharpnessProfile profile;
  double threshold = 1e-8;
  double rda_gamma = 0.0;
  double reference_objective = 0.0;
  std::size_t support_size = 0;
  MethodSummary rmba;
  MethodSummary rda;
  MethodSummary poly;
  Table table;  // method, iter, fval_gap, dist_support, dist_to_reference
};

IdentificationResult run_identification(const ExperimentConfig& config,
                                        double threshold = 1e-8);

// Output paths derived from config.out: the main file plus
// <stem>_reference, <stem>_aggregate and <stem>_trials for convergence runs.
std::string output_path(const ExperimentConfig& config, const std::string& suffix);

void write_convergence(const ConvergenceResult& result, const ExperimentConfig& config);
void write_sensitivity(const SensitivityResult& result, const ExperimentConfig& config);
void write_identification(const IdentificationResult& result, const ExperimentConfig& config);

}  // namespace sharpstep
