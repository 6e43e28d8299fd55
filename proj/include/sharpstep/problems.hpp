#pragma once

// Problem families: robust phase retrieval, robust blind deconvolution and
// l1-regularized logistic regression.  Each family provides a measurement
// sampler, the per-sample loss, the model construction consumed by the
// solvers and an exact distance to its target set.

#include <cstdint>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "sharpstep/prox.hpp"
#include "sharpstep/rng.hpp"
#include "sharpstep/types.hpp"

namespace sharpstep {

enum class Problem { kPhase, kBlind, kLogistic };

enum class Model { kSubgradient, kClipped, kProxLinear, kProxPoint, kProxGradient };

Problem parse_problem(std::string_view tag);
Model parse_model(std::string_view tag);
std::string_view to_string(Problem problem);
std::string_view to_string(Model model);

// ---------------------------------------------------------------- phase

struct PhaseInstance {
  Vector signal;
  double p_fail = 0.0;
  double noise_variance = 100.0;
};

struct PhaseMeasurement {
  Vector a;
  double b = 0.0;
  bool corrupted = false;
};

// Unit-norm signal drawn uniformly from the sphere.
PhaseInstance make_phase_instance(std::size_t d, double p_fail, Stream& rng);

// a ~ N(0, I); b = (a^T xbar)^2 + u |g| with u ~ Bernoulli(p_fail) and
// g ~ N(0, noise_variance).  `out.a` is resized on demand.
void sample_phase(const PhaseInstance& instance, Stream& rng, PhaseMeasurement& out);

double phase_loss(ConstView x, const PhaseMeasurement& z);

// A fixed pool of m measurements in which exactly floor(p_fail m) entries,
// chosen uniformly, carry the gross corruption.
std::vector<PhaseMeasurement> make_phase_pool(const PhaseInstance& instance, std::size_t m,
                                              Stream& rng);

// min(||x - xbar||, ||x + xbar||)
double dist_phase(ConstView x, const PhaseInstance& instance);

// ---------------------------------------------------------------- blind

// Points are stored as the concatenation (x, y), x of length d1 and y of d2.
struct BlindInstance {
  Vector left_signal;
  Vector right_signal;
  double p_fail = 0.0;
  double noise_variance = 100.0;
  double nu = 1.5;

  std::size_t d1() const { return left_signal.size(); }
  std::size_t d2() const { return right_signal.size(); }
  // D = ||xbar|| ||ybar||; iterates live in {||x|| <= nu D, ||y|| <= nu D}.
  double scale() const;
};

struct BlindMeasurement {
  Vector left;
  Vector right;
  double b = 0.0;
  bool corrupted = false;
};

// Unit-norm signals, so D = 1.
BlindInstance make_blind_instance(std::size_t d1, std::size_t d2, double p_fail, double nu,
                                  Stream& rng);

// b = <l, xbar><r, ybar> + u xi with xi ~ N(0, noise_variance).
void sample_blind(const BlindInstance& instance, Stream& rng, BlindMeasurement& out);

double blind_loss(ConstView xy, const BlindMeasurement& z);

std::vector<BlindMeasurement> make_blind_pool(const BlindInstance& instance, std::size_t m,
                                              Stream& rng);

// Distance from (x, y) to {(a xbar, ybar / a) : 1/nu <= |a| <= nu}.
double dist_blind(ConstView x, ConstView y, const BlindInstance& instance);
double dist_blind(ConstView xy, const BlindInstance& instance);

// Independent projections of x and y onto the ball of radius nu D.
void project_blind(MutView xy, const BlindInstance& instance);

// ------------------------------------------------------------- logistic

struct LogisticData {
  Matrix features;  // N x d
  Vector labels;    // entries in {-1, +1}
  std::size_t size() const { return features.rows; }
  std::size_t dim() const { return features.cols; }
};

// Points are (w_1, ..., w_d, b).
struct LogisticInstance {
  LogisticData data;
  double tau = 0.0;
  Vector reference;
  double reference_objective = 0.0;
  double reference_gradient_map = 0.0;
  double support_tolerance = 1e-8;
  std::vector<std::uint8_t> in_support;  // length d
};

// log(1 + exp(-y (<w, x> + b)))
double logistic_sample_loss(const LogisticData& data, std::size_t i, ConstView z);
// Gradient of the sample loss, written into `grad` (length d + 1).
void logistic_sample_gradient(const LogisticData& data, std::size_t i, ConstView z,
                              MutView grad);
// (1/N) sum_i loss_i(z) + tau ||w||_1
double logistic_objective(const LogisticData& data, double tau, ConstView z);
// Full-batch gradient of the smooth part.
void logistic_gradient(const LogisticData& data, ConstView z, MutView grad);

// Accelerated proximal gradient (with adaptive restart) until the gradient
// mapping norm is at most `tolerance`.
Vector solve_logistic(const LogisticData& data, double tau, double tolerance = 1e-9,
                      std::size_t max_iterations = 2'000'000);

// Computes the reference solution and its support.
LogisticInstance make_logistic_instance(LogisticData data, double tau);

// Planted `sparsity`-sparse classifier, Gaussian features, labels flipped
// with probability `flip`.
LogisticInstance synth_logistic(std::size_t d, std::size_t n, std::size_t sparsity, double tau,
                                Stream& rng, double flip = 0.05);

// Norm of the off-support coordinates of w.
double dist_support(ConstView z, const LogisticInstance& instance);

// IDX image/label files, filtered to two digits mapped to +1 / -1 and scaled
// to [0, 1].  Throws FormatError on malformed input and IoError when a file
// cannot be read.
Matrix read_idx_images(const std::string& path);
std::vector<std::uint8_t> read_idx_labels(const std::string& path);
LogisticData load_idx(const std::string& images_path, const std::string& labels_path,
                      int positive_digit, int negative_digit);

// --------------------------------------------------------------- models

using Measurement = std::variant<PhaseMeasurement, BlindMeasurement, std::size_t>;

// The convex model f_x(., z) in the form its anchored minimizer needs.
enum class ModelForm {
  kLinear,          // f(x) + <slope, u - x>
  kAffineAbs,       // |offset + <slope, u - x>|
  kClippedAffine,   // max{offset + <slope, u - x>, 0}
  kQuadraticAbs,    // |(a^T u)^2 - b|
  kBilinearAbs,     // |<l, x'><r, y'> - b|
  kProxGradient,    // offset + <slope, u - x> + tau ||u_w||_1
};

struct ModelBuffer {
  ModelForm form = ModelForm::kLinear;
  double loss = 0.0;    // f(x, z)
  double offset = 0.0;  // model value at the basepoint
  Vector slope;         // sized to the point dimension
  double tau = 0.0;
  prox::QuadraticAbsModel quadratic;
  prox::BilinearAbsModel bilinear;
};

// Builds the model of `model` type for `problem` at `point`.  The logistic
// measurement is a sample index into `logistic`.  Throws
// std::invalid_argument for unsupported combinations.
void build_model(Problem problem, Model model, ConstView point, const Measurement& z,
                 ModelBuffer& out, const LogisticInstance* logistic = nullptr);

// Typed forms used on the hot path.  The built model may reference the
// measurement's vectors, so the measurement must outlive its use.
void build_model(Model model, ConstView point, const PhaseMeasurement& z, ModelBuffer& out);
void build_model(Model model, ConstView point, const BlindMeasurement& z, ModelBuffer& out);
void build_model(Model model, ConstView point, std::size_t index,
                 const LogisticInstance& instance, ModelBuffer& out);

// ------------------------------------------------------------ constants

struct SharpnessProfile {
  double mu = 0.0;
  double eta = 0.0;
  double lipschitz = 0.0;
  // Measurement-law constants the above are composed from.
  double mu_tilde = 0.0;
  double eta_tilde = 0.0;
  double lipschitz_tilde = 0.0;

  // gamma mu / eta; infinite when eta = 0.
  double tube_radius(double gamma) const;
};

// Gaussian measurement-law constants, analytic.
SharpnessProfile phase_constants(const PhaseInstance& instance);
SharpnessProfile blind_constants(const BlindInstance& instance);
// L = sqrt(mean ||x_i||^2), mu = tau sqrt(d) 2^(-exponent), eta = 0.
SharpnessProfile logistic_constants(const LogisticInstance& instance, double mu_exponent);

struct MonteCarloEstimate {
  double value = 0.0;
  double std_error = 0.0;
};

struct GaussianPhaseEstimates {
  MonteCarloEstimate eta_tilde;        // E <a, v>^2
  MonteCarloEstimate lipschitz_tilde;  // sqrt(E <a, v>^2 ||a||^2)
  MonteCarloEstimate mu_tilde;         // E |<a, v><a, w>|, v orthogonal to w
};

// Monte Carlo estimates over Gaussian a in R^d.  Throws std::invalid_argument
// when samples < 10^4.
GaussianPhaseEstimates estimate_gaussian_phase(std::size_t d, std::size_t samples, Stream& rng);

// Population phase loss E|(a^T x)^2 - b| estimated over `samples` draws.
double estimate_phase_loss(ConstView x, const PhaseInstance& instance, std::size_t samples,
                           Stream& rng);

// ground truth + r0 * (uniform unit direction); for blind deconvolution the
// direction is drawn jointly over (x, y).
Vector random_init(const PhaseInstance& instance, double r0, Stream& rng);
Vector random_init(const BlindInstance& instance, double r0, Stream& rng);

}  // namespace sharpstep
