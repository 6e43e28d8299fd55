#pragma once

// The plug-in point of the model-based methods: an oracle draws one sample,
// builds the convex model at the current point and returns the projected
// minimizer of model + quadratic anchor.

#include <cstdint>
#include <memory>
#include <vector>

#include "sharpstep/problems.hpp"
#include "sharpstep/prox.hpp"
#include "sharpstep/rng.hpp"

namespace sharpstep {

class ModelOracle {
 public:
  virtual ~ModelOracle() = default;

  virtual std::size_t dimension() const = 0;

  // Draws z from `samples` and writes
  //   proj_X argmin_u { f_base(u, z) + (anchor.weight / 2) ||u - anchor.center||^2 }
  // into `out`.  `out` may alias neither `base` nor `anchor.center`.
  virtual void step(ConstView base, const prox::QuadraticAnchor& anchor, Stream& samples,
                    MutView out) = 0;

  // Independent copy with its own scratch buffers, for use on another thread.
  virtual std::unique_ptr<ModelOracle> clone() const = 0;

  // Number of bilinear subproblems that needed the bracketed scan.
  virtual std::uint64_t scan_fallbacks() const { return 0; }
};

// Anchored minimizer of a built model.  `split` is d1 for the bilinear form.
prox::BilinearProxInfo solve_model(const ModelBuffer& model, ConstView base,
                                   const prox::QuadraticAnchor& anchor, MutView out,
                                   std::size_t split = 0);

// Streaming oracles draw a fresh measurement per step; pool oracles draw an
// index uniformly (with replacement) into a fixed measurement pool.
std::unique_ptr<ModelOracle> make_phase_oracle(std::shared_ptr<const PhaseInstance> instance,
                                               Model model);
std::unique_ptr<ModelOracle> make_phase_oracle(
    std::shared_ptr<const PhaseInstance> instance, Model model,
    std::shared_ptr<const std::vector<PhaseMeasurement>> pool);

std::unique_ptr<ModelOracle> make_blind_oracle(std::shared_ptr<const BlindInstance> instance,
                                               Model model);
std::unique_ptr<ModelOracle> make_blind_oracle(
    std::shared_ptr<const BlindInstance> instance, Model model,
    std::shared_ptr<const std::vector<BlindMeasurement>> pool);

// Samples uniformly from the N data points; model is the stochastic
// proximal-gradient model.
std::unique_ptr<ModelOracle> make_logistic_oracle(
    std::shared_ptr<const LogisticInstance> instance);

}  // namespace sharpstep
