#include "sharpstep/config.hpp"

#include <fstream>
#include <sstream>

#include <fmt/format.h>
#include <json.hpp>

#include "sharpstep/types.hpp"

namespace sharpstep {
namespace {

using nlohmann::json;

#define SHARPSTEP_CONFIG_FIELDS(X)                                                               \
  X(problem) X(model) X(algorithm) X(d) X(d2) X(pfail) X(mode) X(m_samples) X(trials) X(seed)   \
  X(eps) X(gamma) X(delta2) X(delta_prime) X(r0) X(nu) X(noise_variance) X(is_conv)             \
  X(k_override) X(m_override) X(t_override) X(alpha_exponent) X(stop_dist) X(sample_cap)        \
  X(checkpoints) X(eval_samples) X(threads) X(p_min) X(p_max) X(logistic_n) X(sparsity) X(tau)  \
  X(mu_exponent) X(rda_gammas) X(poly_c) X(poly_p) X(idx_images) X(idx_labels)                  \
  X(digit_positive) X(digit_negative) X(out) X(format)

json to_json_object(const ExperimentConfig& c) {
  json j = json::object();
#define X(name) j[#name] = c.name;
  SHARPSTEP_CONFIG_FIELDS(X)
#undef X
  return j;
}

}  // namespace

ExperimentConfig parse_config(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw FormatError(fmt::format("config is not valid JSON: {}", e.what()));
  }
  if (!doc.is_object()) throw FormatError("config must be a JSON object");
  ExperimentConfig config;
  for (const auto& [key, value] : doc.items()) {
    bool known = false;
    try {
#define X(name)                                 \
  if (key == #name) {                           \
    value.get_to(config.name);                  \
    known = true;                               \
  }
      SHARPSTEP_CONFIG_FIELDS(X)
#undef X
    } catch (const json::exception& e) {
      throw FormatError(fmt::format("config key '{}': {}", key, e.what()));
    }
    if (!known) throw FormatError(fmt::format("unknown config key '{}'", key));
  }
  return config;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError(fmt::format("cannot open config {}", path));
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str());
}

std::string dump_config(const ExperimentConfig& config) { return to_json_object(config).dump(); }

void validate(const ExperimentConfig& c) {
  auto fail = [](const std::string& message) { throw std::invalid_argument(message); };
  if (c.problem != "phase" && c.problem != "blind" && c.problem != "logistic")
    fail(fmt::format("unknown problem '{}'", c.problem));
  if (c.algorithm != "rmba" && c.algorithm != "rpmba" && c.algorithm != "rda" &&
      c.algorithm != "proxgrad-poly")
    fail(fmt::format("unknown algorithm '{}'", c.algorithm));
  if (c.mode != "streaming" && c.mode != "finite") fail(fmt::format("unknown mode '{}'", c.mode));
  if (c.format != "csv" && c.format != "json") fail(fmt::format("unknown format '{}'", c.format));
  if (c.d == 0) fail("d must be positive");
  if (c.trials == 0) fail("trials must be positive");
  if (!(c.pfail >= 0.0 && c.pfail < 0.5)) fail("pfail must lie in [0, 1/2)");
  if (!(c.r0 > 0.0)) fail("r0 must be positive");
  if (c.checkpoints == 0) fail("checkpoints must be positive");
  if (c.p_min > c.p_max) fail("p_min exceeds p_max");
  if (c.rda_gammas.empty()) fail("rda_gammas must not be empty");
}

}  // namespace sharpstep
