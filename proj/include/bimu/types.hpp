#pragma once

#include <cstdint>
#include <stdexcept>

namespace bimu {

using WordId = std::int32_t;

// Token absent from the vocabulary. OOV tokens keep their slot in a sentence
// (windows and alignment indices refer to raw positions) but never act as
// pivots and never appear inside extracted contexts.
inline constexpr WordId kOov = -1;

// Unbounded second-language window ("--window-m inf").
inline constexpr int kInfiniteWindow = -1;

// Bad flags or an inconsistent configuration. CLI exit code 1.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Unreadable or malformed input data. CLI exit code 2.
struct DataError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace bimu
