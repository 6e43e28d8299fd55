#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>
#include <span>
#include <vector>

namespace sharpstep {

// Labels for the sub-streams a trial draws from.  Keeping them separate means
// that, e.g., the K* selection in one algorithm does not shift the
// measurement sequence seen by another.
enum class StreamLabel : std::uint64_t {
  kInstance = 1,
  kInit = 2,
  kSamples = 3,
  kSelect = 4,
  kPool = 5,
  kEval = 6,
  kEnsemble = 7,
  kMonteCarlo = 8,
};

// A reproducible random stream addressed by a path of integers rooted at a
// master seed.  Children derived with the same path always produce the same
// sequence, independently of how much the parent has been consumed.
class Stream {
 public:
  explicit Stream(std::uint64_t master_seed);
  Stream(std::uint64_t master_seed, std::initializer_list<std::uint64_t> path);

  Stream child(std::uint64_t index) const;
  Stream child(StreamLabel label) const { return child(static_cast<std::uint64_t>(label)); }

  double normal();
  void fill_normal(std::span<double> out);
  // Uniform on [0, 1).
  double uniform();
  bool bernoulli(double p);
  // Uniform on {0, ..., n - 1}; n > 0.
  std::size_t index(std::size_t n);

  const std::vector<std::uint64_t>& path() const { return path_; }

 private:
  explicit Stream(std::vector<std::uint64_t> path);

  std::vector<std::uint64_t> path_;
  std::mt19937_64 engine_;
};

}  // namespace sharpstep
