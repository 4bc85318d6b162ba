#include "bimu/sampler.hpp"

#include <algorithm>
#include <cmath>

namespace bimu {

NegativeSampler::NegativeSampler(std::span<const std::int64_t> counts,
                                 double power, std::uint64_t seed)
    : cumulative_(counts.size(), 0.0), power_(power), rng_(seed) {
  if (counts.empty()) throw DataError("negative sampler needs a non-empty vocabulary");
  double mass = 0.0;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    const double p =
        counts[i] > 0 ? std::pow(static_cast<double>(counts[i]), power) : 0.0;
    mass += p;
    cumulative_[i] = mass;
  }
  if (mass <= 0.0) throw DataError("negative sampler: all counts are zero");
  for (double& c : cumulative_) c /= mass;
  cumulative_.back() = 1.0;
}

WordId NegativeSampler::sample(std::mt19937_64& rng) const {
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  const double u = uniform(rng);
  // First entry strictly above u; zero-mass words span empty intervals and
  // are never selected.
  auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
  if (it == cumulative_.end()) --it;
  return static_cast<WordId>(it - cumulative_.begin());
}

}  // namespace bimu
