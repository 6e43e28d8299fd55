#include "sharpstep/rng.hpp"

#include <boost/random/normal_distribution.hpp>
#include <boost/random/uniform_01.hpp>
#include <boost/random/uniform_int_distribution.hpp>

namespace sharpstep {
namespace {

std::mt19937_64 Seeded(const std::vector<std::uint64_t>& path) {
  std::vector<std::uint32_t> words;
  words.reserve(2 * path.size() + 1);
  words.push_back(static_cast<std::uint32_t>(path.size()));
  for (std::uint64_t p : path) {
    words.push_back(static_cast<std::uint32_t>(p & 0xffffffffu));
    words.push_back(static_cast<std::uint32_t>(p >> 32));
  }
  std::seed_seq seq(words.begin(), words.end());
  return std::mt19937_64(seq);
}

}  // namespace

Stream::Stream(std::vector<std::uint64_t> path) : path_(std::move(path)), engine_(Seeded(path_)) {}

Stream::Stream(std::uint64_t master_seed) : Stream(std::vector<std::uint64_t>{master_seed}) {}

Stream::Stream(std::uint64_t master_seed, std::initializer_list<std::uint64_t> path)
    : Stream([&] {
        std::vector<std::uint64_t> full{master_seed};
        full.insert(full.end(), path.begin(), path.end());
        return full;
      }()) {}

Stream Stream::child(std::uint64_t index) const {
  std::vector<std::uint64_t> p = path_;
  p.push_back(index);
  return Stream(std::move(p));
}

double Stream::normal() {
  boost::random::normal_distribution<double> dist;
  return dist(engine_);
}

void Stream::fill_normal(std::span<double> out) {
  boost::random::normal_distribution<double> dist;
  for (double& v : out) v = dist(engine_);
}

double Stream::uniform() {
  boost::random::uniform_01<double> dist;
  return dist(engine_);
}

bool Stream::bernoulli(double p) {
  if (p <= 0.0) return false;
  return uniform() < p;
}

std::size_t Stream::index(std::size_t n) {
  boost::random::uniform_int_distribution<std::size_t> dist(0, n - 1);
  return dist(engine_);
}

}  // namespace sharpstep
