#pragma once

#include <cstdint>
#include <string>

#include "bimu/corpus.hpp"
#include "bimu/types.hpp"

namespace bimu {

enum class Mode { kSg, kMu, kBiMu };

std::string to_string(Mode mode);
Mode mode_from_string(const std::string& name);  // throws UsageError

struct TrainConfig {
  Mode mode = Mode::kBiMu;
  int senses = 3;
  int dim = 50;
  int window_n = 5;
  int window_m = 5;            // kInfiniteWindow for the whole-sentence window
  double lambda = 0.7;         // second-language weight in the encoder
  double lambda_h = 0.0;       // entropy regularizer weight (soft updates)
  bool hard_updates = true;
  // Soft updates only: also follow the encoder path (softmax Jacobian and
  // entropy term) instead of treating the posterior as a constant per step.
  bool soft_backprop_encoder = false;
  int negatives = 1;
  double lr = 0.1;
  int batch_size = 1000;
  std::int64_t min_count = 20;
  double sample_factor = 0.001;
  int epochs = 1;
  std::uint64_t seed = 1;
  int threads = 1;             // >1 opts into lock-free racy updates
  bool lowercase = true;
  bool verbose = true;

  ContextSpec windows() const { return {window_n, window_m}; }
};

// Enforces invariants (SG implies one sense, MU implies lambda 0, lambda in
// [0,1], positive sizes). Returns the normalized copy; throws UsageError on
// anything that cannot be normalized.
TrainConfig validated(TrainConfig config);

}  // namespace bimu
