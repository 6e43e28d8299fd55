#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <vector>

#include "brute_force.hpp"
#include "model_eval.hpp"
#include "sharpstep/oracle.hpp"
#include "sharpstep/problems.hpp"

using namespace sharpstep;

namespace {

Vector random_vector(Stream& rng, std::size_t n) {
  Vector v(n);
  rng.fill_normal(v);
  return v;
}

double norm(ConstView v) { return std::sqrt(model_eval::dot(v, v)); }

double distance(ConstView a, ConstView b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s);
}

}  // namespace

TEST_CASE("problem and model tags") {
  CHECK(parse_problem("blind") == Problem::kBlind);
  CHECK(parse_model("proxgrad") == Model::kProxGradient);
  CHECK(to_string(Model::kClipped) == "clipped");
  CHECK_THROWS_AS(parse_problem("lasso"), std::invalid_argument);
  CHECK_THROWS_AS(parse_model("newton"), std::invalid_argument);
}

TEST_CASE("phase measurements without corruption are exact") {
  Stream rng(21);
  const PhaseInstance instance = make_phase_instance(8, 0.0, rng);
  CHECK(norm(instance.signal) == doctest::Approx(1.0).epsilon(1e-14));
  PhaseMeasurement z;
  for (int k = 0; k < 20; ++k) {
    sample_phase(instance, rng, z);
    const double v = model_eval::dot(z.a, instance.signal);
    CHECK_FALSE(z.corrupted);
    CHECK(z.b == doctest::Approx(v * v).epsilon(1e-14));
    CHECK(phase_loss(instance.signal, z) <= 1e-14);
  }
  Stream mc(22);
  CHECK(estimate_phase_loss(instance.signal, instance, 1000, mc) <= 1e-13);
}

TEST_CASE("phase distance is sign invariant") {
  Stream rng(23);
  const PhaseInstance instance = make_phase_instance(5, 0.1, rng);
  const Vector x = random_vector(rng, 5);
  Vector neg(5);
  for (int i = 0; i < 5; ++i) neg[i] = -x[i];
  CHECK(dist_phase(x, instance) == dist_phase(neg, instance));
  Vector minus_signal(5);
  for (int i = 0; i < 5; ++i) minus_signal[i] = -instance.signal[i];
  CHECK(dist_phase(minus_signal, instance) == 0.0);
}

TEST_CASE("pools corrupt exactly floor(p m) entries") {
  Stream rng(24);
  const PhaseInstance phase = make_phase_instance(6, 0.2, rng);
  for (std::size_t m : {1u, 7u, 48u, 160u}) {
    Stream pool_rng(25, {m});
    const auto pool = make_phase_pool(phase, m, pool_rng);
    REQUIRE(pool.size() == m);
    std::size_t corrupted = 0;
    for (const auto& z : pool) {
      corrupted += z.corrupted;
      const double v = model_eval::dot(z.a, phase.signal);
      if (!z.corrupted) CHECK(z.b == doctest::Approx(v * v).epsilon(1e-14));
    }
    CHECK(corrupted == static_cast<std::size_t>(std::floor(0.2 * m)));
  }
  const BlindInstance blind = make_blind_instance(4, 3, 0.3, 1.5, rng);
  Stream pool_rng(26);
  const auto pool = make_blind_pool(blind, 50, pool_rng);
  std::size_t corrupted = 0;
  for (const auto& z : pool) corrupted += z.corrupted;
  CHECK(corrupted == 15);
}

TEST_CASE("random init lies at distance r0") {
  Stream rng(27);
  const PhaseInstance phase = make_phase_instance(10, 0.0, rng);
  for (double r0 : {0.01, 0.25, 0.6}) {
    const Vector x = random_init(phase, r0, rng);
    CHECK(dist_phase(x, phase) == doctest::Approx(r0).epsilon(1e-12));
  }
  const BlindInstance blind = make_blind_instance(4, 6, 0.0, 1.5, rng);
  const Vector xy = random_init(blind, 0.1, rng);
  Vector truth(blind.left_signal);
  truth.insert(truth.end(), blind.right_signal.begin(), blind.right_signal.end());
  CHECK(distance(xy, truth) == doctest::Approx(0.1).epsilon(1e-12));
}

TEST_CASE("blind distance matches the scaling grid oracle") {
  Stream rng(28);
  for (int rep = 0; rep < 40; ++rep) {
    const double nu = std::vector<double>{1.1, 1.5, 3.0}[rep % 3];
    const std::size_t d1 = 1 + rng.index(4), d2 = 1 + rng.index(4);
    const BlindInstance instance = make_blind_instance(d1, d2, 0.0, nu, rng);
    const Vector x = random_vector(rng, d1), y = random_vector(rng, d2);
    const double oracle =
        brute::blind_distance(x, y, instance.left_signal, instance.right_signal, nu);
    CHECK(std::abs(dist_blind(x, y, instance) - oracle) <= 1e-7);
    Vector xy(x);
    xy.insert(xy.end(), y.begin(), y.end());
    CHECK(dist_blind(xy, instance) == dist_blind(x, y, instance));
  }
}

TEST_CASE("blind distance vanishes on the target set") {
  Stream rng(29);
  const BlindInstance instance = make_blind_instance(3, 2, 0.0, 1.5, rng);
  for (double a : {1.0, -1.0, 1.4, -0.7, 1.0 / 1.5}) {
    Vector x(3), y(2);
    for (int i = 0; i < 3; ++i) x[i] = a * instance.left_signal[i];
    for (int i = 0; i < 2; ++i) y[i] = instance.right_signal[i] / a;
    CHECK(dist_blind(x, y, instance) <= 1e-12);
  }
}

TEST_CASE("blind projection caps each block at nu D") {
  Stream rng(30);
  const BlindInstance instance = make_blind_instance(3, 4, 0.0, 1.5, rng);
  Vector xy = random_vector(rng, 7);
  for (double& v : xy) v *= 10.0;
  project_blind(xy, instance);
  CHECK(norm(ConstView(xy).first(3)) == doctest::Approx(1.5));
  CHECK(norm(ConstView(xy).subspan(3)) == doctest::Approx(1.5));
  Vector small{0.1, 0.0, 0.0, 0.0, 0.2, 0.0, 0.0};
  const Vector before = small;
  project_blind(small, instance);
  CHECK(small == before);
}

TEST_CASE("phase models agree with the loss at the basepoint and stay one-sided") {
  Stream rng(31);
  const PhaseInstance instance = make_phase_instance(4, 0.3, rng);
  PhaseMeasurement z;
  ModelBuffer m;
  for (int rep = 0; rep < 100; ++rep) {
    sample_phase(instance, rng, z);
    const Vector x = random_vector(rng, 4), y = random_vector(rng, 4);
    Vector step(4);
    for (int i = 0; i < 4; ++i) step[i] = y[i] - x[i];
    const double quad = std::pow(model_eval::dot(z.a, step), 2);
    for (Model model : {Model::kSubgradient, Model::kClipped, Model::kProxLinear, Model::kProxPoint}) {
      build_model(model, x, z, m);
      CHECK(model_eval::value(m, x, x) == doctest::Approx(phase_loss(x, z)).epsilon(1e-12));
      CHECK(model_eval::value(m, x, y) <= phase_loss(y, z) + quad + 1e-9 * (1.0 + quad));
    }
    build_model(Model::kProxLinear, x, z, m);
    CHECK(std::abs(model_eval::value(m, x, y) - phase_loss(y, z)) <= quad + 1e-9 * (1.0 + quad));
  }
  CHECK_THROWS_AS(build_model(Model::kProxGradient, Vector(4), z, m), std::invalid_argument);
}

TEST_CASE("blind models agree with the loss at the basepoint") {
  Stream rng(32);
  const BlindInstance instance = make_blind_instance(3, 2, 0.2, 1.5, rng);
  BlindMeasurement z;
  ModelBuffer m;
  for (int rep = 0; rep < 100; ++rep) {
    sample_blind(instance, rng, z);
    const Vector x = random_vector(rng, 5), y = random_vector(rng, 5);
    const double cross = std::abs(
        (model_eval::dot(z.left, ConstView(y).first(3)) - model_eval::dot(z.left, ConstView(x).first(3))) *
        (model_eval::dot(z.right, ConstView(y).subspan(3)) - model_eval::dot(z.right, ConstView(x).subspan(3))));
    for (Model model : {Model::kSubgradient, Model::kClipped, Model::kProxLinear, Model::kProxPoint}) {
      build_model(model, x, z, m);
      CHECK(model_eval::value(m, x, x) == doctest::Approx(blind_loss(x, z)).epsilon(1e-12));
      CHECK(model_eval::value(m, x, y) <= blind_loss(y, z) + cross + 1e-9 * (1.0 + cross));
    }
  }
}

TEST_CASE("solve_model minimizes model plus anchor") {
  // Two-dimensional phase measurements and scalar blind blocks, checked
  // against the nested grid oracle with an anchor centred away from the base.
  Stream rng(33);
  const PhaseInstance phase = make_phase_instance(2, 0.3, rng);
  const BlindInstance blind = make_blind_instance(1, 1, 0.3, 1.5, rng);
  PhaseMeasurement pz;
  BlindMeasurement bz;
  ModelBuffer m;
  for (int rep = 0; rep < 25; ++rep) {
    sample_phase(phase, rng, pz);
    sample_blind(blind, rng, bz);
    const Vector base = random_vector(rng, 2), center = random_vector(rng, 2);
    const double lambda = std::exp(rng.normal());
    for (bool is_blind : {false, true}) {
      for (Model model : {Model::kSubgradient, Model::kClipped, Model::kProxLinear, Model::kProxPoint}) {
        if (is_blind)
          build_model(model, base, bz, m);
        else
          build_model(model, base, pz, m);
        Vector out(2);
        solve_model(m, base, {lambda, center}, out, is_blind ? 1 : 0);
        auto f = [&](double u0, double u1) {
          const Vector u{u0, u1};
          return model_eval::value(m, base, u) +
                 0.5 * lambda * ((u0 - center[0]) * (u0 - center[0]) + (u1 - center[1]) * (u1 - center[1]));
        };
        const double at_center = model_eval::value(m, base, center);
        double radius;
        if (m.form == ModelForm::kLinear)
          radius = 1.5 * norm(m.slope) / lambda + 1e-3;
        else
          radius = std::sqrt(2.0 * std::abs(at_center) / lambda) * 1.05 + 1e-3;
        const auto best = brute::grid_min_2d(f, center[0], center[1], radius);
        CAPTURE(to_string(model));
        CAPTURE(is_blind);
        CHECK(std::abs(f(out[0], out[1]) - best.value) <= 1e-7);
      }
    }
  }
}

TEST_CASE("clipped and prox-linear steps coincide when anchored at the base") {
  Stream rng(34);
  const PhaseInstance phase = make_phase_instance(6, 0.2, rng);
  PhaseMeasurement z;
  ModelBuffer a, b;
  for (int rep = 0; rep < 500; ++rep) {
    sample_phase(phase, rng, z);
    const Vector x = random_vector(rng, 6);
    const double alpha = std::exp(2.0 * rng.normal());
    build_model(Model::kClipped, x, z, a);
    build_model(Model::kProxLinear, x, z, b);
    Vector ua(6), ub(6);
    solve_model(a, x, {1.0 / alpha, x}, ua);
    solve_model(b, x, {1.0 / alpha, x}, ub);
    CHECK(ua == ub);
  }
}

TEST_CASE("sharpness constants for Gaussian phase retrieval") {
  Stream rng(35);
  const PhaseInstance instance = make_phase_instance(20, 0.2, rng);
  const SharpnessProfile p = phase_constants(instance);
  CHECK(p.mu_tilde == doctest::Approx(2.0 / std::numbers::pi));
  CHECK(p.lipschitz_tilde == doctest::Approx(std::sqrt(22.0)));
  CHECK(p.mu == doctest::Approx(0.6 * 2.0 / std::numbers::pi));
  CHECK(p.eta == 1.0);
  CHECK(p.lipschitz == doctest::Approx(2.0 * std::sqrt(22.0) * (1.0 + 0.6 * 2.0 / std::numbers::pi)));
  CHECK(p.tube_radius(1.0) == doctest::Approx(p.mu));
  SharpnessProfile convex;
  convex.mu = 1.0;
  CHECK(std::isinf(convex.tube_radius(1.0)));
}

TEST_CASE("Monte Carlo constants") {
  Stream rng(36);
  CHECK_THROWS_AS(estimate_gaussian_phase(5, 9'999, rng), std::invalid_argument);
  const auto e = estimate_gaussian_phase(5, 200'000, rng);
  CHECK(std::abs(e.eta_tilde.value - 1.0) <= 5.0 * e.eta_tilde.std_error);
  CHECK(std::abs(e.lipschitz_tilde.value - std::sqrt(7.0)) <= 5.0 * e.lipschitz_tilde.std_error);
  CHECK(std::abs(e.mu_tilde.value - 2.0 / std::numbers::pi) <= 5.0 * e.mu_tilde.std_error);
}

TEST_CASE("logistic gradients match central differences") {
  Stream rng(37);
  LogisticData data;
  data.features = Matrix(30, 4);
  rng.fill_normal(data.features.data);
  for (std::size_t i = 0; i < 30; ++i) data.labels.push_back(rng.bernoulli(0.5) ? 1.0 : -1.0);
  const Vector z = random_vector(rng, 5);
  Vector g(5), full(5);
  logistic_sample_gradient(data, 3, z, g);
  logistic_gradient(data, z, full);
  for (std::size_t j = 0; j < 5; ++j) {
    Vector hi = z, lo = z;
    hi[j] += 1e-6;
    lo[j] -= 1e-6;
    CHECK(g[j] == doctest::Approx((logistic_sample_loss(data, 3, hi) - logistic_sample_loss(data, 3, lo)) / 2e-6).epsilon(1e-6));
    const double fd = (logistic_objective(data, 0.0, hi) - logistic_objective(data, 0.0, lo)) / 2e-6;
    CHECK(full[j] == doctest::Approx(fd).epsilon(1e-6));
  }
  double mean = 0.0;
  for (std::size_t i = 0; i < 30; ++i) mean += logistic_sample_loss(data, i, z);
  double l1 = 0.0;
  for (std::size_t j = 0; j < 4; ++j) l1 += std::abs(z[j]);
  CHECK(logistic_objective(data, 0.3, z) == doctest::Approx(mean / 30.0 + 0.3 * l1));
}

TEST_CASE("synthetic logistic reference satisfies the optimality conditions") {
  Stream rng(38);
  const LogisticInstance instance = synth_logistic(12, 300, 3, 0.05, rng);
  CHECK(instance.reference_gradient_map <= 1e-8);
  Vector grad(13);
  logistic_gradient(instance.data, instance.reference, grad);
  std::size_t support = 0;
  for (std::size_t j = 0; j < 12; ++j) {
    if (instance.in_support[j]) {
      ++support;
      CHECK(grad[j] == doctest::Approx(-0.05 * (instance.reference[j] > 0 ? 1.0 : -1.0)).epsilon(1e-6));
    } else {
      CHECK(std::abs(grad[j]) <= 0.05 + 1e-7);
    }
  }
  CHECK(std::abs(grad[12]) <= 1e-7);
  CHECK(support >= 1);
  CHECK(dist_support(instance.reference, instance) == 0.0);
  Stream again(38);
  const LogisticInstance twin = synth_logistic(12, 300, 3, 0.05, again);
  CHECK(twin.reference == instance.reference);
  const SharpnessProfile p = logistic_constants(instance, 2.0);
  CHECK(p.eta == 0.0);
  CHECK(p.mu == doctest::Approx(0.05 * std::sqrt(12.0) / 4.0));
}

namespace {

// Minimal IDX writer: big-endian magic, dimensions, raw bytes.
void write_idx(const std::string& path, std::uint32_t magic, std::vector<std::uint32_t> dims,
               const std::vector<std::uint8_t>& payload) {
  std::ofstream out(path, std::ios::binary);
  auto word = [&](std::uint32_t v) {
    const char bytes[4] = {static_cast<char>(v >> 24), static_cast<char>(v >> 16),
                           static_cast<char>(v >> 8), static_cast<char>(v)};
    out.write(bytes, 4);
  };
  word(magic);
  for (auto d : dims) word(d);
  out.write(reinterpret_cast<const char*>(payload.data()), static_cast<std::streamsize>(payload.size()));
}

}  // namespace

TEST_CASE("IDX fixtures") {
  const auto dir = std::filesystem::temp_directory_path() / "sharpstep_idx_test";
  std::filesystem::create_directories(dir);
  const std::string images = (dir / "images").string(), labels = (dir / "labels").string();
  // Four 2 x 3 images, digits 6, 1, 7, 6.
  std::vector<std::uint8_t> pixels(24);
  for (std::size_t k = 0; k < 24; ++k) pixels[k] = static_cast<std::uint8_t>(k * 10);
  write_idx(images, 0x803, {4, 2, 3}, pixels);
  write_idx(labels, 0x801, {4}, {6, 1, 7, 6});

  const Matrix m = read_idx_images(images);
  CHECK(m.rows == 4);
  CHECK(m.cols == 6);
  CHECK(m.data[7] == doctest::Approx(70.0 / 255.0));
  CHECK(read_idx_labels(labels) == std::vector<std::uint8_t>{6, 1, 7, 6});

  const LogisticData data = load_idx(images, labels, 6, 7);
  CHECK(data.size() == 3);
  CHECK(data.labels == Vector{1.0, -1.0, 1.0});
  CHECK(data.features.row(1)[0] == doctest::Approx(120.0 / 255.0));

  CHECK_THROWS_AS(read_idx_images(labels), FormatError);
  CHECK_THROWS_AS(read_idx_labels((dir / "missing").string()), IoError);
  write_idx((dir / "short").string(), 0x803, {4, 2, 3}, {1, 2, 3});
  CHECK_THROWS_AS(read_idx_images((dir / "short").string()), FormatError);
  write_idx((dir / "labels3").string(), 0x801, {3}, {6, 1, 7});
  CHECK_THROWS_AS(load_idx(images, (dir / "labels3").string(), 6, 7), FormatError);
  std::filesystem::remove_all(dir);
}
