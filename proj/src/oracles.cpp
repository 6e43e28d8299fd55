#include <algorithm>

#include "sharpstep/oracle.hpp"

namespace sharpstep {

prox::BilinearProxInfo solve_model(const ModelBuffer& model, ConstView base,
                                   const prox::QuadraticAnchor& anchor, MutView out,
                                   std::size_t split) {
  switch (model.form) {
    case ModelForm::kLinear:
      prox::linear_prox(model.slope, anchor, out);
      break;
    case ModelForm::kAffineAbs: {
      const double offset = prox::rebase_offset(model.offset, model.slope, base, anchor.center);
      prox::affine_abs_prox({offset, model.slope}, anchor, out);
      break;
    }
    case ModelForm::kClippedAffine: {
      const double offset = prox::rebase_offset(model.offset, model.slope, base, anchor.center);
      prox::clipped_affine_abs_prox({offset, model.slope}, 0.0, anchor, out);
      break;
    }
    case ModelForm::kQuadraticAbs:
      prox::quadratic_abs_prox(model.quadratic, anchor, out);
      break;
    case ModelForm::kBilinearAbs:
      return prox::bilinear_abs_prox(model.bilinear, {anchor.weight, anchor.center.first(split)},
                                     {anchor.weight, anchor.center.subspan(split)},
                                     out.first(split), out.subspan(split));
    case ModelForm::kProxGradient: {
      prox::linear_prox(model.slope, anchor, out);
      const std::size_t d = out.size() - 1;
      prox::soft_threshold(out.first(d), model.tau / anchor.weight, out.first(d));
      break;
    }
  }
  return {};
}

namespace {

template <typename Instance, typename Item>
class MeasurementOracle final : public ModelOracle {
 public:
  using Pool = std::vector<Item>;

  MeasurementOracle(std::shared_ptr<const Instance> instance, Model model,
                    std::shared_ptr<const Pool> pool)
      : instance_(std::move(instance)), model_(model), pool_(std::move(pool)) {
    // Reject unsupported combinations up front rather than on the first step.
    if (model_ == Model::kProxGradient)
      throw std::invalid_argument("proxgrad model applies to logistic problems only");
    if (pool_ && pool_->empty()) throw std::invalid_argument("measurement pool is empty");
  }

  std::size_t dimension() const override;

  void step(ConstView base, const prox::QuadraticAnchor& anchor, Stream& samples,
            MutView out) override {
    const Item* item = &z_;
    if (pool_) {
      item = &(*pool_)[samples.index(pool_->size())];
    } else {
      draw(samples);
    }
    build_model(model_, base, *item, buffer_);
    const auto info = solve_model(buffer_, base, anchor, out, split());
    fallbacks_ += info.scan_fallback;
    project(out);
  }

  std::unique_ptr<ModelOracle> clone() const override {
    return std::make_unique<MeasurementOracle>(instance_, model_, pool_);
  }

  std::uint64_t scan_fallbacks() const override { return fallbacks_; }

 private:
  void draw(Stream& samples);
  std::size_t split() const;
  void project(MutView out) const;

  std::shared_ptr<const Instance> instance_;
  Model model_;
  std::shared_ptr<const Pool> pool_;
  Item z_;
  ModelBuffer buffer_;
  std::uint64_t fallbacks_ = 0;
};

template <>
std::size_t MeasurementOracle<PhaseInstance, PhaseMeasurement>::dimension() const {
  return instance_->signal.size();
}
template <>
void MeasurementOracle<PhaseInstance, PhaseMeasurement>::draw(Stream& samples) {
  sample_phase(*instance_, samples, z_);
}
template <>
std::size_t MeasurementOracle<PhaseInstance, PhaseMeasurement>::split() const {
  return 0;
}
template <>
void MeasurementOracle<PhaseInstance, PhaseMeasurement>::project(MutView) const {}

template <>
std::size_t MeasurementOracle<BlindInstance, BlindMeasurement>::dimension() const {
  return instance_->d1() + instance_->d2();
}
template <>
void MeasurementOracle<BlindInstance, BlindMeasurement>::draw(Stream& samples) {
  sample_blind(*instance_, samples, z_);
}
template <>
std::size_t MeasurementOracle<BlindInstance, BlindMeasurement>::split() const {
  return instance_->d1();
}
template <>
void MeasurementOracle<BlindInstance, BlindMeasurement>::project(MutView out) const {
  project_blind(out, *instance_);
}

class LogisticOracle final : public ModelOracle {
 public:
  explicit LogisticOracle(std::shared_ptr<const LogisticInstance> instance)
      : instance_(std::move(instance)) {}

  std::size_t dimension() const override { return instance_->data.dim() + 1; }

  void step(ConstView base, const prox::QuadraticAnchor& anchor, Stream& samples,
            MutView out) override {
    const std::size_t index = samples.index(instance_->data.size());
    build_model(Model::kProxGradient, base, index, *instance_, buffer_);
    solve_model(buffer_, base, anchor, out);
  }

  std::unique_ptr<ModelOracle> clone() const override {
    return std::make_unique<LogisticOracle>(instance_);
  }

 private:
  std::shared_ptr<const LogisticInstance> instance_;
  ModelBuffer buffer_;
};

}  // namespace

std::unique_ptr<ModelOracle> make_phase_oracle(std::shared_ptr<const PhaseInstance> instance,
                                               Model model) {
  return make_phase_oracle(std::move(instance), model, nullptr);
}

std::unique_ptr<ModelOracle> make_phase_oracle(
    std::shared_ptr<const PhaseInstance> instance, Model model,
    std::shared_ptr<const std::vector<PhaseMeasurement>> pool) {
  return std::make_unique<MeasurementOracle<PhaseInstance, PhaseMeasurement>>(
      std::move(instance), model, std::move(pool));
}

std::unique_ptr<ModelOracle> make_blind_oracle(std::shared_ptr<const BlindInstance> instance,
                                               Model model) {
  return make_blind_oracle(std::move(instance), model, nullptr);
}

std::unique_ptr<ModelOracle> make_blind_oracle(
    std::shared_ptr<const BlindInstance> instance, Model model,
    std::shared_ptr<const std::vector<BlindMeasurement>> pool) {
  return std::make_unique<MeasurementOracle<BlindInstance, BlindMeasurement>>(
      std::move(instance), model, std::move(pool));
}

std::unique_ptr<ModelOracle> make_logistic_oracle(
    std::shared_ptr<const LogisticInstance> instance) {
  return std::make_unique<LogisticOracle>(std::move(instance));
}

}  // namespace sharpstep
