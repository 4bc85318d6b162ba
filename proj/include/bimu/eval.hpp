#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "bimu/bank.hpp"
#include "bimu/types.hpp"
#include "bimu/vocab.hpp"

namespace bimu {

struct PivotContext {
  std::vector<std::string> tokens;
  std::size_t pivot_pos = 0;
};

struct WordPairItem {
  std::string word1, word2;
  double gold = 0.0;
  std::optional<PivotContext> context1, context2;
};

struct EvalResult {
  std::string benchmark;
  double rho = 0.0;
  std::size_t n_used = 0;
  std::size_t n_skipped = 0;
};

// Spearman rank correlation with averaged ranks for ties. Throws DataError
// when either input is constant (undefined correlation).
double spearman(std::span<const double> xs, std::span<const double> ys);

// `word1<TAB>word2<TAB>score`, '#' lines ignored.
std::vector<WordPairItem> load_pair_file(const std::string& path, bool lowercase);

// `word1<TAB>word2<TAB>score<TAB>context1<TAB>context2` with the pivot
// marked as <b>word</b> inside each context.
std::vector<WordPairItem> load_context_file(const std::string& path, bool lowercase);

// Context-free scoring by cosine of uniform representations. restrict_top
// keeps only pairs whose both words rank within the top-N training
// frequencies; everything else (and OOV) is skipped and counted.
EvalResult eval_pairs(const EmbeddingBank& bank, const Vocabulary& vocab,
                      std::span<const WordPairItem> items,
                      std::optional<std::int64_t> restrict_top,
                      const std::string& benchmark);

// Contextual protocol: each side is represented by the posterior-weighted
// sense mixture inferred from a window of n tokens around its marked pivot.
EvalResult eval_scws(const EmbeddingBank& bank, const Vocabulary& vocab,
                     std::span<const WordPairItem> items, int window_n,
                     const std::string& benchmark);

struct DiffCi {
  double low = 0.0, high = 0.0;
  double rho_a = 0.0, rho_b = 0.0;
  std::size_t n_used = 0, n_skipped = 0;
};

// Percentile bootstrap over items for rho_a - rho_b. Deterministic given the
// seed regardless of thread count (each resample derives its own generator).
// Degenerate resamples are redrawn a bounded number of times.
DiffCi bootstrap_diff_ci(std::span<const double> gold,
                         std::span<const double> scores_a,
                         std::span<const double> scores_b, int resamples,
                         double confidence, std::uint64_t seed);

DiffCi correlation_diff_ci(const EmbeddingBank& bank_a, const Vocabulary& vocab_a,
                           const EmbeddingBank& bank_b, const Vocabulary& vocab_b,
                           std::span<const WordPairItem> items, int resamples,
                           double confidence, std::uint64_t seed);

}  // namespace bimu
