#include "bimu/vocab.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <utility>

namespace bimu {

namespace {

bool has_whitespace(std::string_view token) {
  return std::any_of(token.begin(), token.end(), [](unsigned char c) {
    return std::isspace(c) != 0;
  });
}

}  // namespace

Vocabulary::Vocabulary(std::vector<std::string> words,
                       std::vector<std::int64_t> counts)
    : words_(std::move(words)), counts_(std::move(counts)) {
  if (words_.size() != counts_.size()) {
    throw DataError("vocabulary word and count lists differ in length");
  }
  ids_.reserve(words_.size());
  for (std::size_t i = 0; i < words_.size(); ++i) {
    if (has_whitespace(words_[i])) {
      throw DataError("vocabulary word contains whitespace: '" + words_[i] + "'");
    }
    if (i > 0 && counts_[i] > counts_[i - 1]) {
      throw DataError("vocabulary counts must be non-increasing in id order");
    }
    if (!ids_.emplace(words_[i], static_cast<WordId>(i)).second) {
      throw DataError("duplicate vocabulary word: '" + words_[i] + "'");
    }
    total_ += static_cast<std::uint64_t>(counts_[i]);
  }
}

void VocabBuilder::add(std::string_view token) {
  if (has_whitespace(token)) {
    throw DataError("token contains whitespace: '" + std::string(token) + "'");
  }
  ++counts_[std::string(token)];
  ++tokens_seen_;
}

void VocabBuilder::merge(const VocabBuilder& other) {
  for (const auto& [word, count] : other.counts_) counts_[word] += count;
  tokens_seen_ += other.tokens_seen_;
}

Vocabulary VocabBuilder::build(std::int64_t min_count) const {
  std::vector<std::pair<std::string, std::int64_t>> kept;
  kept.reserve(counts_.size());
  for (const auto& [word, count] : counts_) {
    if (count >= min_count) kept.emplace_back(word, count);
  }
  if (kept.empty()) {
    throw DataError("no words above threshold (min_count=" +
                    std::to_string(min_count) + ")");
  }
  std::sort(kept.begin(), kept.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  std::vector<std::string> words;
  std::vector<std::int64_t> counts;
  words.reserve(kept.size());
  counts.reserve(kept.size());
  for (auto& [word, count] : kept) {
    words.push_back(std::move(word));
    counts.push_back(count);
  }
  return Vocabulary(std::move(words), std::move(counts));
}

Vocabulary build_vocab(std::span<const std::string> tokens, std::int64_t min_count) {
  VocabBuilder builder;
  for (const std::string& token : tokens) builder.add(token);
  return builder.build(min_count);
}

double keep_probability(std::int64_t count, std::uint64_t total,
                        double sample_factor) {
  const double f = static_cast<double>(count) / static_cast<double>(total);
  const double ratio = sample_factor / f;
  return std::min(1.0, std::sqrt(ratio) + ratio);
}

}  // namespace bimu
