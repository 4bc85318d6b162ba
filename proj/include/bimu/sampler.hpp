#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "bimu/types.hpp"

namespace bimu {

// Noise distribution for negative sampling: unigram counts raised to a power
// (0.75 by default), normalized into a cumulative table. Words with count 0
// carry zero mass and are never drawn.
class NegativeSampler {
 public:
  NegativeSampler(std::span<const std::int64_t> counts, double power,
                  std::uint64_t seed);

  WordId sample() { return sample(rng_); }
  WordId sample(std::mt19937_64& rng) const;

  double power() const { return power_; }
  std::span<const double> cumulative() const { return cumulative_; }

 private:
  std::vector<double> cumulative_;
  double power_;
  std::mt19937_64 rng_;
};

}  // namespace bimu
