#include "bimu/config.hpp"

#include <iostream>

namespace bimu {

std::string to_string(Mode mode) {
  switch (mode) {
    case Mode::kSg: return "sg";
    case Mode::kMu: return "mu";
    case Mode::kBiMu: return "bimu";
  }
  return "?";
}

Mode mode_from_string(const std::string& name) {
  if (name == "sg") return Mode::kSg;
  if (name == "mu") return Mode::kMu;
  if (name == "bimu") return Mode::kBiMu;
  throw UsageError("unknown mode '" + name + "' (expected sg, mu or bimu)");
}

TrainConfig validated(TrainConfig config) {
  if (config.lambda < 0.0 || config.lambda > 1.0) {
    throw UsageError("--lambda must lie in [0,1]");
  }
  if (config.mode == Mode::kSg && config.senses != 1) {
    if (config.verbose) {
      std::cerr << "[config] sg mode forces --senses 1 (was "
                << config.senses << ")\n";
    }
    config.senses = 1;
  }
  if (config.mode == Mode::kMu && config.lambda != 0.0) {
    if (config.verbose) {
      std::cerr << "[config] mu mode forces --lambda 0 (was "
                << config.lambda << ")\n";
    }
    config.lambda = 0.0;
  }
  if (config.senses < 1) throw UsageError("--senses must be at least 1");
  if (config.dim < 1) throw UsageError("--dim must be at least 1");
  config.windows().validate();
  if (config.negatives < 0) throw UsageError("--negatives must be >= 0");
  if (config.lr <= 0.0) throw UsageError("--lr must be positive");
  if (config.batch_size < 1) throw UsageError("--batch must be at least 1");
  if (config.min_count < 1) throw UsageError("--min-count must be at least 1");
  if (config.sample_factor <= 0.0) throw UsageError("--sample must be positive");
  if (config.epochs < 1) throw UsageError("--epochs must be at least 1");
  if (config.threads < 1) throw UsageError("--threads must be at least 1");
  return config;
}

}  // namespace bimu
