// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 when
// any criterion fails.

#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <functional>
#include <memory>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "brute_force.hpp"
#include "prox_cases.hpp"
#include "sharpstep/baselines.hpp"
#include "sharpstep/config.hpp"
#include "sharpstep/emit.hpp"
#include "sharpstep/harness.hpp"
#include "sharpstep/oracle.hpp"
#include "sharpstep/problems.hpp"
#include "sharpstep/solvers.hpp"

using namespace sharpstep;
namespace fs = std::filesystem;

namespace {

struct Verdict {
  bool pass = false;
  std::string detail;
};

int failures = 0;

void report(const std::string& name, const std::function<Verdict()>& check) {
  const auto start = std::chrono::steady_clock::now();
  Verdict v;
  try {
    v = check();
  } catch (const std::exception& e) {
    v = {false, fmt::format("exception: {}", e.what())};
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (!v.pass) ++failures;
  fmt::print("{} {}: {} ({:.1f} s)\n", v.pass ? "PASS" : "FAIL", name, v.detail, secs);
  std::fflush(stdout);
}

Vector random_vector(Stream& rng, std::size_t n) {
  Vector v(n);
  rng.fill_normal(v);
  return v;
}

double norm(ConstView v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

// 1. Every prox family agrees with the grid oracle.
Verdict prox_oracle() {
  Stream rng(1001);
  std::string detail;
  bool pass = true;
  for (const auto& family : prox_cases::families()) {
    double worst = 0.0;
    for (int rep = 0; rep < 1000; ++rep) worst = std::max(worst, family.run(rng).gap());
    pass = pass && worst <= 1e-6;
    detail += fmt::format("{} max gap {:.1e}; ", family.name, worst);
  }
  return {pass, detail};
}

// 2. Per-stage halving on noisy streaming phase retrieval.
Verdict stage_halving() {
  ExperimentConfig c;
  c.problem = "phase";
  c.model = "proxlinear";
  c.algorithm = "rmba";
  c.d = 20;
  c.pfail = 0.2;
  c.mode = "streaming";
  c.gamma = 1.0;
  c.delta2 = 1.0 / std::sqrt(10.0);
  c.r0 = 0.25;
  c.eps = 0.25 / 256.0;  // T = 8 stages
  c.trials = 10;
  c.seed = 2;
  c.checkpoints = 1;
  c.eval_samples = 16;
  const ConvergenceResult r = run_convergence(c);
  int good = 0;
  for (const auto& t : r.trials) {
    bool ok = t.stage_dist.size() == 8;
    for (std::size_t s = 0; ok && s < t.stage_dist.size(); ++s)
      ok = t.stage_dist[s] <= std::ldexp(r.r0, -static_cast<int>(s + 1));
    good += ok;
  }
  return {good >= 7, fmt::format("T = {}, K = {}; halving held in {}/10 trials (need 7)",
                                 r.schedule.T, r.schedule.K, good)};
}

// 3. Noiseless finite-sample runs reach 1e-10 with the exact models.
Verdict noiseless_exact() {
  std::string detail;
  bool pass = true;
  for (const std::string model : {"proxlinear", "clipped"}) {
    ExperimentConfig c;
    c.problem = "phase";
    c.model = model;
    c.d = 20;
    c.pfail = 0.0;
    c.mode = "finite";
    c.m_samples = 160;
    c.trials = 10;
    c.seed = 3;
    c.stop_dist = 1e-10;
    c.checkpoints = 1;
    const ConvergenceResult r = run_convergence(c);
    int reached = 0;
    std::uint64_t worst = 0;
    for (const auto& t : r.trials) {
      if (t.final_dist <= 1e-10) {
        ++reached;
        worst = std::max(worst, t.samples);
      }
    }
    pass = pass && reached >= 9;
    detail += fmt::format("{} {}/10 (max samples {} of {}); ", model, reached, worst, r.sample_cap);
  }
  return {pass, detail};
}

// Hashes every iterate bit for bit.
class IterateHasher : public Observer {
 public:
  bool on_step(const StepInfo& info) override {
    for (double x : info.iterate) {
      std::uint64_t bits = 0;
      std::memcpy(&bits, &x, sizeof bits);
      for (int b = 0; b < 8; ++b) {
        hash ^= (bits >> (8 * b)) & 0xff;
        hash *= 1099511628211ULL;
      }
    }
    ++steps;
    return true;
  }
  std::uint64_t hash = 14695981039346656037ULL;
  std::uint64_t steps = 0;
};

// 4. Prox-linear and clipped models produce the same iterates.
Verdict clipped_identity() {
  int identical = 0;
  std::uint64_t steps = 0;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    Stream root(400 + seed);
    Stream instance_rng = root.child(StreamLabel::kInstance);
    auto instance = std::make_shared<const PhaseInstance>(make_phase_instance(10, 0.2, instance_rng));
    Stream init_rng = root.child(StreamLabel::kInit);
    const Vector x0 = random_init(*instance, 0.25, init_rng);
    const SharpnessProfile p = phase_constants(*instance);
    const Schedule s =
        schedule_nonconvex(0.25, 0.02, 1.0 / std::sqrt(10.0), 1.0, p.mu, p.eta, p.lipschitz);
    IterateHasher hp, hc;
    auto proxlinear = make_phase_oracle(instance, Model::kProxLinear);
    auto clipped = make_phase_oracle(instance, Model::kClipped);
    const RunResult a = rmba(*proxlinear, x0, s.alpha0, s.K, s.T, false, root, &hp);
    const RunResult b = rmba(*clipped, x0, s.alpha0, s.K, s.T, false, root, &hc);
    identical += hp.steps == hc.steps && hp.hash == hc.hash && a.point == b.point;
    steps += hp.steps;
  }
  return {identical == 5,
          fmt::format("{}/5 seeds bitwise identical over {} iterates", identical, steps)};
}

// 5. Majority-ball selection concentrates around the common center.
Verdict ensemble_concentration() {
  Stream rng(505);
  const std::size_t m = 100, dim = 3;
  const double eps = 0.1, p = 0.75;
  int hits = 0;
  const int reps = 2000;
  for (int rep = 0; rep < reps; ++rep) {
    const Vector center = random_vector(rng, dim);
    // Failed trials collude at one far point, the least favourable case.
    Vector decoy = random_vector(rng, dim);
    const double scale = 10.0 * eps / norm(decoy);
    for (std::size_t i = 0; i < dim; ++i) decoy[i] = center[i] + scale * decoy[i];
    std::vector<Vector> points;
    for (std::size_t j = 0; j < m; ++j) {
      if (rng.uniform() < p) {
        Vector u = random_vector(rng, dim);
        const double r = eps * std::cbrt(rng.uniform()) / norm(u);
        for (std::size_t i = 0; i < dim; ++i) u[i] = center[i] + r * u[i];
        points.push_back(std::move(u));
      } else {
        points.push_back(decoy);
      }
    }
    const auto chosen = ensemble_select(points, eps);
    if (!chosen) continue;
    Vector diff(dim);
    for (std::size_t i = 0; i < dim; ++i) diff[i] = points[*chosen][i] - center[i];
    hits += norm(diff) <= 3.0 * eps;
  }
  const double fraction = static_cast<double>(hits) / reps;
  const double bound = 1.0 - std::exp(-(1.0 / (2.0 * p)) * m * (p - 0.5) * (p - 0.5));
  return {fraction >= 0.98,
          fmt::format("fraction {:.4f} (bound {:.4f}, need 0.98)", fraction, bound)};
}

// 6. Blind deconvolution distance against the scaling grid.
Verdict blind_distance() {
  Stream rng(606);
  double worst = 0.0;
  for (int rep = 0; rep < 500; ++rep) {
    const double nu = std::vector<double>{1.1, 1.5, 3.0}[rep % 3];
    const std::size_t d1 = 1 + rng.index(5), d2 = 1 + rng.index(5);
    const BlindInstance instance = make_blind_instance(d1, d2, 0.0, nu, rng);
    const Vector x = random_vector(rng, d1), y = random_vector(rng, d2);
    const double oracle =
        brute::blind_distance(x, y, instance.left_signal, instance.right_signal, nu);
    worst = std::max(worst, std::abs(dist_blind(x, y, instance) - oracle));
  }
  return {worst <= 1e-5, fmt::format("max deviation {:.1e} over 500 instances", worst)};
}

// 7. Monte Carlo constants for Gaussian phase retrieval at d = 10.
Verdict gaussian_constants() {
  Stream rng(707);
  const GaussianPhaseEstimates e = estimate_gaussian_phase(10, 1'000'000, rng);
  const double eta = e.eta_tilde.value, lip = e.lipschitz_tilde.value, mu = e.mu_tilde.value;
  const bool pass = std::abs(eta - 1.0) <= 0.02 &&
                    std::abs(lip - std::sqrt(12.0)) <= 0.02 * std::sqrt(12.0) &&
                    std::abs(mu - 2.0 / std::numbers::pi) <= 0.005;
  return {pass, fmt::format("eta~ {:.4f}, L~ {:.4f} (sqrt 12 = {:.4f}), mu~ {:.4f} (2/pi = {:.4f})",
                            eta, lip, std::sqrt(12.0), mu, 2.0 / std::numbers::pi)};
}

// 8. Restarted proximal ensemble method at reduced inner length.
Verdict rpmba_desk_scale() {
  ExperimentConfig c;
  c.problem = "phase";
  c.model = "proxlinear";
  c.algorithm = "rpmba";
  c.d = 20;
  c.pfail = 0.0;
  c.r0 = 0.15;
  c.eps = 0.15 / 256.0;
  c.k_override = 10'000;
  c.m_override = 11;
  c.t_override = 8;
  c.trials = 10;
  c.seed = 8;
  c.checkpoints = 1;
  c.eval_samples = 16;
  const ConvergenceResult r = run_convergence(c);
  const Schedule& s = r.schedule;
  int reached = 0;
  bool geometric = s.M == 11 && s.T == 8 && s.K == 10'000;
  for (const auto& t : r.trials) {
    reached += t.final_dist <= std::ldexp(r.r0, -8);
    geometric = geometric && t.stages.size() == 8;
    for (const auto& st : t.stages) {
      const int k = st.stage - 1;
      geometric = geometric && st.rho == std::ldexp(s.rho0, k) &&
                  st.alpha == std::ldexp(s.alpha0, -k) && st.eps == std::ldexp(s.eps0, -k);
    }
  }
  return {reached >= 9 && geometric,
          fmt::format("{}/10 trials within 2^-8 R0 (need 9); schedule trajectory {}", reached,
                      geometric ? "exact" : "MISMATCH")};
}

// 9. Support identification on a synthetic sparse logistic problem.
Verdict identification() {
  const double threshold = 1e-8;
  int rmba_ok = 0, both_ok = 0;
  std::string detail;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    ExperimentConfig c;
    c.problem = "logistic";
    c.model = "proxgrad";
    c.d = 50;
    c.logistic_n = 2000;
    c.sparsity = 5;
    c.tau = 0.05;
    c.mu_exponent = -7.0;
    c.eps = 1e-10;
    c.checkpoints = 4;
    c.seed = seed;
    const IdentificationResult r = run_identification(c, threshold);
    const MethodSummary& m = r.rmba;
    const std::uint64_t stage = r.schedule.K + 1;
    const bool rmba = m.first_identified && m.stays_identified &&
                      m.iterations - *m.first_identified >= stage &&
                      m.fval_gap_at_identification > 1e-4;
    const bool rda = rmba && r.rda.dist_support_at_reference_iter >= 10.0 * threshold;
    rmba_ok += rmba;
    both_ok += rda;
    detail += fmt::format(
        "[seed {}: rmba id {} gap {:.1e}; rda ds there {:.1e}, rda id {}] ", seed,
        m.first_identified ? fmt::format("{}", *m.first_identified) : "never",
        m.fval_gap_at_identification, r.rda.dist_support_at_reference_iter,
        r.rda.first_identified ? fmt::format("{}", *r.rda.first_identified) : "never");
  }
  return {both_ok >= 4, fmt::format("rmba separation {}/5, rda 10x larger {}/5 (need 4); {}",
                                    rmba_ok, both_ok, detail)};
}

// 10. RDA closed form against coordinatewise numeric minimization.
Verdict rda_closed_form() {
  Stream rng(1010);
  double worst = 0.0;
  for (int rep = 0; rep < 1000; ++rep) {
    const std::size_t n = 2 + rng.index(8);
    RdaState s = make_rda_state(n, std::exp(2.0 * rng.normal()), 0.3 * std::exp(rng.normal()));
    s.t = 1 + rng.index(100'000);
    rng.fill_normal(s.mean_gradient);
    Vector z(n);
    rda_minimizer(s, z);
    const auto expected = brute::rda_argmin(s.mean_gradient, static_cast<double>(s.t), s.gamma, s.tau);
    for (std::size_t j = 0; j < n; ++j)
      worst = std::max(worst, std::abs(z[j] - expected[j]) / (1.0 + std::abs(expected[j])));
  }
  return {worst <= 1e-8, fmt::format("max relative deviation {:.1e} over 1000 states", worst)};
}

// 11. Repeated CLI runs give identical files apart from wall_ms.
std::string strip_wall(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  const std::string text = s.str();
  if (path.extension() == ".csv") {
    Table t = parse_csv(text);
    for (std::size_t c = 0; c < t.columns.size(); ++c)
      if (t.columns[c] == "wall_ms")
        for (auto& row : t.rows) row[c] = std::int64_t{0};
    return to_csv(t);
  }
  std::string out;
  std::istringstream lines(text);
  std::string line;
  while (std::getline(lines, line))
    if (line.find("\"wall_ms\"") == std::string::npos) out += line + "\n";
  return out;
}

Verdict cli_determinism() {
  const fs::path dir = fs::temp_directory_path() / "sharpstep_acceptance";
  fs::remove_all(dir);
  fs::create_directories(dir);
  struct Case {
    std::string command, config, ext;
  };
  const std::vector<Case> cases = {
      {"convergence", R"({"d": 10, "pfail": 0.1, "trials": 3, "eps": 0.01, "sample_cap": 30000, "checkpoints": 5})", "csv"},
      {"convergence", R"({"d": 6, "problem": "blind", "model": "proxpoint", "pfail": 0.1, "mode": "finite", "r0": 0.04, "trials": 2, "eps": 0.005, "sample_cap": 20000, "format": "json"})", "json"},
      {"sensitivity", R"({"d": 8, "pfail": 0.1, "trials": 2, "eps": 0.02, "p_min": -2, "p_max": 2, "sample_cap": 10000})", "csv"},
      {"identification", R"({"problem": "logistic", "model": "proxgrad", "d": 10, "logistic_n": 200, "sparsity": 2, "eps": 0.001, "k_override": 300, "t_override": 4, "checkpoints": 5})", "csv"},
  };
  int same = 0;
  std::string detail;
  for (std::size_t i = 0; i < cases.size(); ++i) {
    const auto& k = cases[i];
    const fs::path config = dir / fmt::format("case{}.json", i);
    std::ofstream(config) << k.config;
    std::vector<std::vector<fs::path>> produced(2);
    bool ok = true;
    for (int run = 0; run < 2; ++run) {
      const fs::path run_dir = dir / fmt::format("case{}_run{}", i, run);
      fs::create_directories(run_dir);
      const std::string cmd =
          fmt::format("{} run {} --config {} --seed 11 --out {} > /dev/null 2>&1", SHARPSTEP_CLI,
                      k.command, config.string(), (run_dir / ("out." + k.ext)).string());
      const int status = std::system(cmd.c_str());
      ok = ok && WIFEXITED(status) && WEXITSTATUS(status) == 0;
      for (const auto& entry : fs::directory_iterator(run_dir)) produced[run].push_back(entry.path());
      std::sort(produced[run].begin(), produced[run].end());
    }
    ok = ok && !produced[0].empty() && produced[0].size() == produced[1].size();
    for (std::size_t f = 0; ok && f < produced[0].size(); ++f)
      ok = produced[0][f].filename() == produced[1][f].filename() &&
           strip_wall(produced[0][f]) == strip_wall(produced[1][f]);
    same += ok;
    detail += fmt::format("{} {}: {} files {}; ", k.command, k.ext, produced[0].size(),
                          ok ? "identical" : "DIFFER");
  }
  return {same == static_cast<int>(cases.size()), detail};
}

}  // namespace

int main() {
  report("prox operators match the grid oracle", prox_oracle);
  report("per-stage halving, noisy phase retrieval", stage_halving);
  report("noiseless runs reach 1e-10", noiseless_exact);
  report("prox-linear and clipped iterates coincide", clipped_identity);
  report("ensemble selection concentration", ensemble_concentration);
  report("blind deconvolution distance", blind_distance);
  report("Gaussian phase constants", gaussian_constants);
  report("rpmba at reduced inner length", rpmba_desk_scale);
  report("support identification", identification);
  report("RDA closed form", rda_closed_form);
  report("CLI determinism", cli_determinism);
  fmt::print("{} criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
