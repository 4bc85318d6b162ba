#include "bimu/inference.hpp"

#include <algorithm>

#include "bimu/math.hpp"

namespace bimu {

namespace {

void check_pivot(const EmbeddingBank& bank, WordId pivot) {
  if (pivot < 0 || pivot >= bank.vocab_size) {
    throw DataError("unknown word (id " + std::to_string(pivot) + ")");
  }
}

}  // namespace

SensePosterior infer_posterior(const EmbeddingBank& bank, WordId pivot,
                               std::span<const WordId> context) {
  check_pivot(bank, pivot);
  // Test time drops the second-language term entirely.
  return encode_posterior(bank, pivot, context, {}, 0.0);
}

WordRepresentation contextual_representation(const EmbeddingBank& bank,
                                             WordId pivot,
                                             std::span<const WordId> context) {
  const SensePosterior q = infer_posterior(bank, pivot, context);
  WordRepresentation rep;
  rep.provenance = Provenance::kContextual;
  rep.vector.assign(static_cast<std::size_t>(bank.dim), 0.0);
  for (int s = 0; s < bank.senses; ++s) {
    const auto phi = bank.phi_row(pivot, s);
    for (int i = 0; i < bank.dim; ++i) rep.vector[i] += q.probs[s] * phi[i];
  }
  return rep;
}

WordRepresentation uniform_representation(const EmbeddingBank& bank, WordId pivot) {
  check_pivot(bank, pivot);
  WordRepresentation rep;
  rep.provenance =
      bank.senses == 1 ? Provenance::kSingleSense : Provenance::kUniform;
  rep.vector.assign(static_cast<std::size_t>(bank.dim), 0.0);
  const double w = 1.0 / static_cast<double>(bank.senses);
  for (int s = 0; s < bank.senses; ++s) {
    const auto phi = bank.phi_row(pivot, s);
    for (int i = 0; i < bank.dim; ++i) rep.vector[i] += w * phi[i];
  }
  return rep;
}

std::vector<Neighbor> nearest_neighbors(const EmbeddingBank& bank, WordId pivot,
                                        std::optional<int> sense, int k,
                                        std::size_t* degenerate) {
  check_pivot(bank, pivot);
  if (k < 1) throw UsageError("neighbors: k must be at least 1");
  if (sense.has_value() && (*sense < 0 || *sense >= bank.senses)) {
    throw UsageError("neighbors: sense index out of range");
  }
  const auto vocab_size = static_cast<std::size_t>(bank.vocab_size);
  std::vector<double> query =
      sense.has_value()
          ? std::vector<double>(bank.phi_row(pivot, *sense).begin(),
                                bank.phi_row(pivot, *sense).end())
          : uniform_representation(bank, pivot).vector;

  std::vector<Neighbor> scored(vocab_size);
  std::vector<unsigned char> zero_flags(vocab_size, 0);
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
  for (std::int64_t w = 0; w < bank.vocab_size; ++w) {
    bool zero = false;
    double score;
    if (sense.has_value()) {
      score = cosine(query, bank.phi_row(static_cast<WordId>(w), *sense), &zero);
    } else {
      const auto rep = uniform_representation(bank, static_cast<WordId>(w));
      score = cosine(query, rep.vector, &zero);
    }
    scored[static_cast<std::size_t>(w)] = {static_cast<WordId>(w), score};
    zero_flags[static_cast<std::size_t>(w)] = zero ? 1 : 0;
  }
  if (degenerate != nullptr) {
    *degenerate = static_cast<std::size_t>(
        std::count(zero_flags.begin(), zero_flags.end(), 1));
  }
  scored.erase(std::remove_if(scored.begin(), scored.end(),
                              [&](const Neighbor& n) { return n.word == pivot; }),
               scored.end());
  const auto limit = std::min<std::size_t>(static_cast<std::size_t>(k), scored.size());
  std::partial_sort(scored.begin(), scored.begin() + limit, scored.end(),
                    [](const Neighbor& a, const Neighbor& b) {
                      if (a.cosine != b.cosine) return a.cosine > b.cosine;
                      return a.word < b.word;
                    });
  scored.resize(limit);
  return scored;
}

}  // namespace bimu
