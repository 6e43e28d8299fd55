#pragma once

// Stochastic model-based methods with geometric step decay:
//
//   mba    one inner loop with constant stepsize
//   rmba   restarts of mba with the stepsize halved per stage
//   pmba   mba on the problem regularized by (rho/2)||. - y0||^2
//   epmba  m independent pmba runs followed by a majority-ball vote
//   rpmba  restarts of epmba, doubling rho and halving alpha and eps
//
// Stages are numbered 1..T in traces; stage s runs with alpha_0 2^-(s-1)
// (and rho_0 2^(s-1), eps_0 2^-(s-1)) and produces the iterate x_s.

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "sharpstep/oracle.hpp"
#include "sharpstep/rng.hpp"
#include "sharpstep/types.hpp"

namespace sharpstep {

struct StepInfo {
  int stage = 1;
  std::size_t copy = 0;     // ensemble member (0 outside epmba)
  std::uint64_t inner = 0;  // index k + 1 of the iterate just produced
  std::uint64_t samples = 0;  // cumulative over the whole run
  ConstView iterate;
};

struct StageRecord {
  int stage = 1;
  double alpha = 0.0;
  double rho = 0.0;
  double eps = 0.0;
  std::uint64_t samples = 0;  // cumulative at the end of the stage
  // Ensemble vote (rpmba only).
  bool ensemble_failed = false;
  std::size_t selected = 0;
  std::size_t neighbors = 0;
};

class Observer {
 public:
  virtual ~Observer() = default;
  // Called after every inner step.  Returning false stops the run; the
  // solver then returns the iterate just produced.
  virtual bool on_step(const StepInfo& /*info*/) { return true; }
  virtual void on_stage(const StageRecord& /*record*/, ConstView /*output*/) {}
};

// Bookkeeping shared by nested solver calls.
struct RunContext {
  Observer* observer = nullptr;
  int stage = 1;
  std::size_t copy = 0;
  std::uint64_t samples = 0;
  bool stopped = false;
};

struct RunResult {
  Vector point;
  std::vector<StageRecord> stages;
  std::uint64_t samples = 0;
  bool stopped = false;
};

// K + 1 anchored steps y_{k+1} = step(y_k) for k = 0..K.  Returns y_{K*} with
// K* uniform on {0..K} drawn from `select`, or the average of y_1..y_{K+1}
// when is_conv is set.
Vector mba(ModelOracle& oracle, ConstView y0, double alpha, std::uint64_t K, bool is_conv,
           Stream& samples, Stream& select, RunContext* context = nullptr);

// As mba, with the composed anchor of weight 1/alpha + rho centred at
// (y_k / alpha + rho y0) / (1/alpha + rho).  rho = 0 is exactly mba.
Vector pmba(ModelOracle& oracle, ConstView y0, double rho, double alpha, std::uint64_t K,
            Stream& samples, Stream& select, RunContext* context = nullptr);

// First index (scan order) whose closed 2 eps ball holds more than m/2 of
// the points; nullopt when none does.
std::optional<std::size_t> ensemble_select(const std::vector<Vector>& points, double eps);

struct EnsembleVote {
  std::size_t index = 0;
  std::size_t neighbors = 0;
  bool majority = false;
};

// ensemble_select, falling back to the point with the most neighbours
// (first in scan order on ties) when no index has a majority.
EnsembleVote ensemble_vote(const std::vector<Vector>& points, double eps);

struct EnsembleResult {
  Vector point;
  EnsembleVote vote;
};

// m pmba copies; copy j draws from rng.child(j).  Failure to find a majority
// is reported in the vote, not thrown.
EnsembleResult epmba(ModelOracle& oracle, ConstView y0, double rho, double alpha,
                     std::uint64_t K, std::size_t m, double eps, const Stream& rng,
                     RunContext* context = nullptr);

// Stage samples and K* draws come from rng.child(kSamples) and
// rng.child(kSelect), each continuing across stages.
RunResult rmba(ModelOracle& oracle, ConstView x0, double alpha0, std::uint64_t K, int T,
               bool is_conv, const Stream& rng, Observer* observer = nullptr);

// Stage s uses rng.child(kEnsemble).child(s) as the ensemble root.
RunResult rpmba(ModelOracle& oracle, ConstView x0, double rho0, double alpha0, std::uint64_t K,
                double eps0, std::size_t M, int T, const Stream& rng,
                Observer* observer = nullptr);

// ------------------------------------------------------------ schedules

struct Schedule {
  std::string kind;  // convex | nonconvex | highprob
  int T = 0;
  std::uint64_t K = 0;
  std::uint64_t M = 1;
  double alpha0 = 0.0;
  double rho0 = 0.0;
  double eps0 = 0.0;
  double delta = 0.0;  // delta, delta_2 or delta' depending on kind
  double gamma = 0.0;
  double r0 = 0.0;
  double eps = 0.0;
  // Guaranteed success probability (nonconvex); NaN when not applicable.
  double success_probability = std::numeric_limits<double>::quiet_NaN();
  // Total-sample bound stated alongside the schedule.
  double sample_bound = 0.0;
};

// Smallest T with 2^T eps >= r0.  Throws ScheduleError unless 0 < eps < r0.
int stage_count(double r0, double eps);

// T = ceil(log2(r0/eps)), K = floor(8 T^2 (L/(delta mu))^2),
// alpha0 = sqrt(r0^2 / (2 L^2 (K+1))).
Schedule schedule_convex(double r0, double eps, double delta, double mu, double lipschitz);

// K = floor(16/(2-gamma)^2 T^2 (L/(delta2 mu))^2), alpha0 = sqrt(r0^2 / (L^2 (K+1))).
// Requires r0 <= gamma mu / eta and gamma in (0, 2).
Schedule schedule_nonconvex(double r0, double eps, double delta2, double gamma, double mu,
                            double eta, double lipschitz);

// rho0 = mu/(2 r0), eps0 = r0/3, K = floor((864 L/mu)^2), M = ceil(48 log(T/delta')),
// alpha0 as in the nonconvex schedule.  Requires r0 <= gamma mu/(4 eta).
Schedule schedule_highprob(double r0, double eps, double delta_prime, double gamma, double mu,
                           double eta, double lipschitz);

}  // namespace sharpstep
