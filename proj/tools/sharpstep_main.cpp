// Command-line front end:
//   sharpstep run convergence|sensitivity|identification [--config file] [flags]
// Exit status: 0 on success, 2 when the step schedule is rejected, 1 on
// input/output or configuration errors.

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "sharpstep/config.hpp"
#include "sharpstep/harness.hpp"
#include "sharpstep/types.hpp"

namespace {

using sharpstep::ExperimentConfig;

struct Overrides {
  std::optional<std::string> problem, model, algorithm, mode, out, format;
  std::optional<std::size_t> d, m_samples, trials;
  std::optional<std::uint64_t> seed;
  std::optional<double> pfail, eps, gamma, delta2, delta_prime, r0;

  void apply(ExperimentConfig& c) const {
    auto set = [](auto& field, const auto& value) {
      if (value) field = *value;
    };
    set(c.problem, problem);
    set(c.model, model);
    set(c.algorithm, algorithm);
    set(c.mode, mode);
    set(c.out, out);
    set(c.format, format);
    set(c.d, d);
    set(c.m_samples, m_samples);
    set(c.trials, trials);
    set(c.seed, seed);
    set(c.pfail, pfail);
    set(c.eps, eps);
    set(c.gamma, gamma);
    set(c.delta2, delta2);
    set(c.delta_prime, delta_prime);
    set(c.r0, r0);
  }
};

void print_schedule(const sharpstep::Schedule& s) {
  fmt::print("schedule {}: T={} K={} M={} alpha0={:.6g} rho0={:.6g} eps0={:.6g} sample_bound={:.6g}\n",
             s.kind, s.T, s.K, s.M, s.alpha0, s.rho0, s.eps0, s.sample_bound);
}

int run(const std::string& experiment, ExperimentConfig config) {
  if (experiment == "convergence") {
    const auto result = sharpstep::run_convergence(config);
    print_schedule(result.schedule);
    for (std::size_t t = 0; t < result.trials.size(); ++t) {
      const auto& trial = result.trials[t];
      fmt::print("trial {}: dist {:.3e} -> {:.3e}, samples {}, samples_to_target {}\n", t,
                 trial.initial_dist, trial.final_dist, trial.samples, trial.samples_to_target);
    }
    sharpstep::write_convergence(result, config);
  } else if (experiment == "sensitivity") {
    const auto result = sharpstep::run_stepsize_sensitivity(config);
    print_schedule(result.schedule);
    for (const auto& row : result.rows)
      fmt::print("p={:+d}: mean_iters {:.4g} (std {:.3g}), final dist {:.3e}\n", row.p,
                 row.mean_iters, row.std_iters, row.mean_final_dist);
    sharpstep::write_sensitivity(result, config);
  } else {
    const auto result = sharpstep::run_identification(config);
    print_schedule(result.schedule);
    for (const auto* m : {&result.rmba, &result.rda, &result.poly}) {
      const std::string first =
          m->first_identified ? std::to_string(*m->first_identified) : std::string("never");
      fmt::print("{}: identified at {} (stays: {}), final fval gap {:.3e}, final dist_support {:.3e}\n",
                 m->method, first, m->stays_identified, m->final_fval_gap, m->final_dist_support);
    }
    sharpstep::write_identification(result, config);
  }
  fmt::print("wrote {}\n", sharpstep::output_path(config, ""));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Stochastic model-based minimization with geometric step decay"};
  app.require_subcommand(1);
  CLI::App* run_cmd = app.add_subcommand("run", "Run an experiment");

  std::string experiment;
  std::string config_path;
  Overrides o;
  run_cmd->add_option("experiment", experiment, "convergence | sensitivity | identification")
      ->required()
      ->check(CLI::IsMember({"convergence", "sensitivity", "identification"}));
  run_cmd->add_option("--config", config_path, "JSON configuration file");
  run_cmd->add_option("--problem", o.problem, "phase | blind | logistic");
  run_cmd->add_option("--model", o.model, "subgradient | clipped | proxlinear | proxpoint | proxgrad");
  run_cmd->add_option("--algorithm", o.algorithm, "rmba | rpmba");
  run_cmd->add_option("--d", o.d, "dimension");
  run_cmd->add_option("--pfail", o.pfail, "corruption probability");
  run_cmd->add_option("--mode", o.mode, "streaming | finite");
  run_cmd->add_option("--m-samples", o.m_samples, "finite pool size (0: 8d)");
  run_cmd->add_option("--trials", o.trials, "independent trials");
  run_cmd->add_option("--seed", o.seed, "master seed");
  run_cmd->add_option("--eps", o.eps, "target accuracy");
  run_cmd->add_option("--gamma", o.gamma, "tube parameter in (0, 2)");
  run_cmd->add_option("--delta2", o.delta2, "failure parameter (rmba)");
  run_cmd->add_option("--delta-prime", o.delta_prime, "failure probability (rpmba)");
  run_cmd->add_option("--r0", o.r0, "initial radius relative to the ground-truth norm");
  run_cmd->add_option("--out", o.out, "output file");
  run_cmd->add_option("--format", o.format, "csv | json");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    ExperimentConfig config =
        config_path.empty() ? ExperimentConfig{} : sharpstep::load_config(config_path);
    o.apply(config);
    return run(experiment, config);
  } catch (const sharpstep::ScheduleError& e) {
    fmt::print(stderr, "schedule rejected: {}\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return 1;
  }
}
