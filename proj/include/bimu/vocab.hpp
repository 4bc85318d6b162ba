#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "bimu/types.hpp"

namespace bimu {

// Word <-> id map with counts. Ids are dense 0..|V|-1, ordered by descending
// count (ties broken alphabetically, so the order is reproducible across
// runs). total_tokens() is the summed count of the stored words, which is the
// normalizer used for subsampling frequencies.
class Vocabulary {
 public:
  Vocabulary() = default;
  // Takes ownership of an already ordered (count non-increasing) word list.
  Vocabulary(std::vector<std::string> words, std::vector<std::int64_t> counts);

  WordId id(const std::string& word) const {
    auto it = ids_.find(word);
    return it == ids_.end() ? kOov : it->second;
  }
  const std::string& word(WordId id) const { return words_[static_cast<std::size_t>(id)]; }
  std::int64_t count(WordId id) const { return counts_[static_cast<std::size_t>(id)]; }
  std::size_t size() const { return words_.size(); }
  std::uint64_t total_tokens() const { return total_; }
  std::span<const std::string> words() const { return words_; }
  std::span<const std::int64_t> counts() const { return counts_; }

 private:
  std::vector<std::string> words_;
  std::vector<std::int64_t> counts_;
  std::unordered_map<std::string, WordId> ids_;
  std::uint64_t total_ = 0;
};

// Streaming count accumulator. Counts are additive, so shards built on
// separate threads can be merged before the final build.
class VocabBuilder {
 public:
  void add(std::string_view token);
  void merge(const VocabBuilder& other);
  std::uint64_t tokens_seen() const { return tokens_seen_; }
  // Drops words below min_count; throws DataError when nothing survives.
  Vocabulary build(std::int64_t min_count) const;

 private:
  std::unordered_map<std::string, std::int64_t> counts_;
  std::uint64_t tokens_seen_ = 0;
};

Vocabulary build_vocab(std::span<const std::string> tokens, std::int64_t min_count);

// Probability of keeping an occurrence of a word with the given corpus count
// under frequent-word subsampling: min(1, sqrt(t/f) + t/f) with f = count/total.
double keep_probability(std::int64_t count, std::uint64_t total, double sample_factor);

}  // namespace bimu
