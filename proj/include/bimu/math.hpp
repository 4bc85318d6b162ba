#pragma once

#include <cmath>
#include <cstdint>
#include <span>

namespace bimu {

inline double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

// log(sigmoid(x)) without overflow for large |x|.
inline double log_sigmoid(double x) {
  if (x >= 0.0) return -std::log1p(std::exp(-x));
  return x - std::log1p(std::exp(x));
}

inline double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

// Max-shifted softmax. Zero logits map to the exact uniform vector.
void softmax_inplace(std::span<double> z);

// Shannon entropy in nats; 0 * log 0 taken as 0.
double entropy(std::span<const double> p);

// Cosine similarity; 0 when either vector is all zero (*degenerate is set
// when provided so callers can warn).
double cosine(std::span<const double> a, std::span<const double> b,
              bool* degenerate = nullptr);

// Cheap stream splitter for deriving independent RNG seeds from (seed,
// epoch, instance) coordinates.
std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b, std::uint64_t c);

}  // namespace bimu
