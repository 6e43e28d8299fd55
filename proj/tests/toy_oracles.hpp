#pragma once

// Deterministic oracles with closed-form iterates for solver tests.

#include <memory>

#include "sharpstep/oracle.hpp"

namespace toy {

using namespace sharpstep;

// f(u) = (1/2)||u||^2 with its linear model at the base point:
//   out = center - base / weight.
// One uniform draw per step keeps sample accounting observable.
class QuadraticOracle final : public ModelOracle {
 public:
  explicit QuadraticOracle(std::size_t n) : n_(n) {}
  std::size_t dimension() const override { return n_; }
  void step(ConstView base, const prox::QuadraticAnchor& anchor, Stream& samples,
            MutView out) override {
    samples.uniform();
    ++draws;
    for (std::size_t i = 0; i < n_; ++i) out[i] = anchor.center[i] - base[i] / anchor.weight;
  }
  std::unique_ptr<ModelOracle> clone() const override {
    return std::make_unique<QuadraticOracle>(n_);
  }
  std::uint64_t draws = 0;

 private:
  std::size_t n_;
};

}  // namespace toy
