#include "bimu/batch.hpp"

#include <algorithm>

#include "bimu/math.hpp"

namespace bimu {

BatchStream::BatchStream(const std::vector<ParallelSentence>& corpus,
                         const Vocabulary& vocab, const TrainConfig& config,
                         std::uint64_t seed)
    : corpus_(&corpus), vocab_(&vocab), config_(config), seed_(seed) {
  keep_prob_.resize(vocab.size());
  for (std::size_t w = 0; w < vocab.size(); ++w) {
    keep_prob_[w] = keep_probability(vocab.count(static_cast<WordId>(w)),
                                     vocab.total_tokens(), config.sample_factor);
  }
  order_.resize(corpus.size());
  for (std::size_t i = 0; i < order_.size(); ++i) order_[i] = i;
  start_epoch(0);
}

void BatchStream::start_epoch(int epoch) {
  rng_.seed(mix_seed(seed_, 0x5ba7c0u, static_cast<std::uint64_t>(epoch)));
  std::shuffle(order_.begin(), order_.end(), rng_);
  next_sentence_ = 0;
  pending_.clear();
  pending_pos_ = 0;
  emitted_ = 0;
}

void BatchStream::emit_sentence(const ParallelSentence& sentence) {
  // Subsampling removes a token both as pivot and from other words' windows;
  // OOV slots stay in place so windows shrink over them.
  filtered_.clear();
  original_pos_.clear();
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  for (std::size_t p = 0; p < sentence.tokens_l.size(); ++p) {
    const WordId w = sentence.tokens_l[p];
    if (w != kOov && uniform(rng_) >= keep_prob_[static_cast<std::size_t>(w)]) {
      continue;
    }
    filtered_.push_back(w);
    original_pos_.push_back(static_cast<int>(p));
  }
  const bool has_foreign = !sentence.tokens_l2.empty();
  const ContextSpec windows = config_.windows();
  for (std::size_t p = 0; p < filtered_.size(); ++p) {
    if (filtered_[p] == kOov) continue;
    TrainingInstance instance;
    instance.pivot = filtered_[p];
    extract_context(filtered_, p, windows.n, instance.context);
    if (has_foreign) {
      const auto affiliated =
          affiliation_index(sentence.alignment, original_pos_[p]);
      foreign_context(sentence.tokens_l2, affiliated, windows.m,
                      instance.foreign);
    }
    instance.targets = instance.context;
    instance.index = emitted_ + pending_.size();
    pending_.push_back(std::move(instance));
  }
}

bool BatchStream::next_batch(std::vector<TrainingInstance>& out) {
  out.clear();
  const auto batch_size = static_cast<std::size_t>(config_.batch_size);
  while (out.size() < batch_size) {
    if (pending_pos_ == pending_.size()) {
      pending_.clear();
      pending_pos_ = 0;
      if (next_sentence_ == order_.size()) break;
      emit_sentence((*corpus_)[order_[next_sentence_++]]);
      continue;
    }
    out.push_back(std::move(pending_[pending_pos_++]));
    ++emitted_;
  }
  return !out.empty();
}

}  // namespace bimu
