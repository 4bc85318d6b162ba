#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "bimu/config.hpp"
#include "bimu/corpus.hpp"
#include "bimu/types.hpp"
#include "bimu/vocab.hpp"

namespace bimu {

// One pivot occurrence ready for training. `targets` are the words the
// decoder predicts; with symmetric windows they coincide with `context`.
struct TrainingInstance {
  WordId pivot = kOov;
  std::vector<WordId> context;   // C_i, window order
  std::vector<WordId> foreign;   // C'_i
  std::vector<WordId> targets;
  std::uint64_t index = 0;       // position in the epoch stream
};

// Deterministic single-producer instance stream. Each epoch shuffles the
// sentence order from the seed, subsamples frequent words (removing them
// both as pivots and from other words' windows, before window extraction),
// and emits one instance per kept in-vocabulary pivot. Batches have
// config.batch_size instances except possibly the last one.
class BatchStream {
 public:
  BatchStream(const std::vector<ParallelSentence>& corpus,
              const Vocabulary& vocab, const TrainConfig& config,
              std::uint64_t seed);

  void start_epoch(int epoch);
  // Fills `out`; returns false once the epoch is exhausted and `out` is empty.
  bool next_batch(std::vector<TrainingInstance>& out);

  std::uint64_t instances_emitted() const { return emitted_; }

 private:
  void emit_sentence(const ParallelSentence& sentence);

  const std::vector<ParallelSentence>* corpus_;
  const Vocabulary* vocab_;
  TrainConfig config_;
  std::uint64_t seed_;
  std::vector<double> keep_prob_;       // per word id
  std::vector<std::size_t> order_;
  std::size_t next_sentence_ = 0;
  std::vector<TrainingInstance> pending_;
  std::size_t pending_pos_ = 0;
  std::uint64_t emitted_ = 0;
  std::mt19937_64 rng_;
  // scratch
  std::vector<WordId> filtered_;
  std::vector<int> original_pos_;
};

}  // namespace bimu
