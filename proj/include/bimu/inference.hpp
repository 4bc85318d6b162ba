#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "bimu/bank.hpp"
#include "bimu/model.hpp"
#include "bimu/types.hpp"

namespace bimu {

enum class Provenance { kContextual, kUniform, kSingleSense };

struct WordRepresentation {
  std::vector<double> vector;
  Provenance provenance = Provenance::kUniform;
};

// Test-time sense posterior: the encoder with the second-language term
// dropped. Empty context gives the uniform posterior. Throws DataError for
// an out-of-vocabulary pivot.
SensePosterior infer_posterior(const EmbeddingBank& bank, WordId pivot,
                               std::span<const WordId> context);

// Posterior-weighted mixture of the pivot's sense vectors.
WordRepresentation contextual_representation(const EmbeddingBank& bank,
                                             WordId pivot,
                                             std::span<const WordId> context);

// Plain average of the pivot's sense vectors.
WordRepresentation uniform_representation(const EmbeddingBank& bank, WordId pivot);

struct Neighbor {
  WordId word = kOov;
  double cosine = 0.0;
};

// Top-k words by cosine, comparing phi[., sense] when a sense is given and
// uniform representations otherwise. The pivot is excluded; ties break
// toward the lower word id. `degenerate` (when given) counts zero-vector
// comparisons, which score 0.
std::vector<Neighbor> nearest_neighbors(const EmbeddingBank& bank, WordId pivot,
                                        std::optional<int> sense, int k,
                                        std::size_t* degenerate = nullptr);

}  // namespace bimu
