#pragma once

// Experiment configuration.  Loaded from a JSON object whose keys are the
// field names below; command-line flags override individual fields.

#include <cstdint>
#include <string>
#include <vector>

namespace sharpstep {

struct ExperimentConfig {
  std::string problem = "phase";      // phase | blind | logistic
  std::string model = "proxlinear";   // subgradient | clipped | proxlinear | proxpoint | proxgrad
  std::string algorithm = "rmba";     // rmba | rpmba | rda | proxgrad-poly
  std::size_t d = 100;
  std::size_t d2 = 0;                 // blind deconvolution; 0 means d
  double pfail = 0.0;
  std::string mode = "streaming";     // streaming | finite
  std::size_t m_samples = 0;          // finite pool size; 0 means 8 d
  std::size_t trials = 10;
  std::uint64_t seed = 1;
  double eps = 1e-5;
  double gamma = 1.0;
  double delta2 = 0.31622776601683794;  // 1 / sqrt(10)
  double delta_prime = 0.1;
  double r0 = 0.25;                   // relative to the ground-truth norm
  double nu = 1.5;
  double noise_variance = 100.0;
  bool is_conv = false;

  // Schedule overrides (0 keeps the derived value).
  std::uint64_t k_override = 0;
  std::uint64_t m_override = 0;
  int t_override = 0;
  double alpha_exponent = 0.0;        // alpha0 scaled by 2^alpha_exponent

  // Run control.
  double stop_dist = 0.0;             // stop a trial once dist <= stop_dist
  std::uint64_t sample_cap = 0;       // 0: the schedule's sample bound
  std::uint64_t checkpoints = 100;    // per stage
  std::size_t eval_samples = 256;     // streaming loss estimate
  std::size_t threads = 0;            // 0: hardware concurrency

  // Step-size sensitivity.
  int p_min = -10;
  int p_max = 10;

  // Activity identification.
  std::size_t logistic_n = 2000;
  std::size_t sparsity = 5;
  double tau = 0.05;
  double mu_exponent = 0.0;
  std::vector<double> rda_gammas = {1e-3, 1e-2, 1e-1, 1.0, 1e1, 1e2, 1e3};
  double poly_c = 1.0;
  double poly_p = 0.5;
  std::string idx_images;
  std::string idx_labels;
  int digit_positive = 6;
  int digit_negative = 7;

  std::string out = "results.csv";
  std::string format = "csv";
};

// Throws FormatError on malformed JSON, unknown keys or mistyped values,
// IoError when the file cannot be read.
ExperimentConfig load_config(const std::string& path);
ExperimentConfig parse_config(const std::string& json_text);

// JSON rendering of every field (used in output metadata and tests).
std::string dump_config(const ExperimentConfig& config);

// Throws std::invalid_argument for inconsistent settings.
void validate(const ExperimentConfig& config);

}  // namespace sharpstep
