#pragma once

#include <cstdint>
#include <vector>

#include "bimu/bank.hpp"
#include "bimu/batch.hpp"
#include "bimu/config.hpp"
#include "bimu/corpus.hpp"
#include "bimu/types.hpp"
#include "bimu/vocab.hpp"

namespace bimu {

// Pretrained generic second-language vectors with their own vocabulary.
struct ForeignEmbeddings {
  Vocabulary vocab;
  int dim = 0;
  std::vector<double> table;  // [word] * dim
};

struct TrainReport {
  Mode mode = Mode::kSg;
  bool hard_updates = true;
  std::vector<double> epoch_objective;          // mean score per prediction
  std::vector<std::uint64_t> epoch_instances;
  std::vector<std::uint64_t> epoch_predictions;
  std::uint64_t instances = 0;
  double wall_seconds = 0.0;
  TrainConfig config;
};

struct TrainResult {
  EmbeddingBank bank;
  TrainReport report;
};

// Runs the configured number of epochs over the corpus. Hard updates pick
// the argmax sense per instance and update only that sense's phi row plus
// the touched gamma rows; soft updates apply grads_soft once per instance.
// SG bypasses the encoder (sense 0 always). threads == 1 is the serial
// reference path and is bit-reproducible from the seed; threads > 1 runs the
// same per-instance kernel under OpenMP with lock-free racy updates.
// BiMu requires `foreign` and a corpus carrying alignments.
TrainResult train(const std::vector<ParallelSentence>& corpus,
                  const Vocabulary& vocab, const TrainConfig& config,
                  const ForeignEmbeddings* foreign = nullptr);

// Skip-Gram pretraining of the second-language table on monolingual text;
// returns the trained generic (gamma) vectors, which is the table the
// encoder consumes as gamma2. The table is mean-centered: its common
// direction would otherwise enter the encoder as a context-independent
// per-sense bias. The returned dim follows config.dim.
ForeignEmbeddings pretrain_foreign(const std::vector<ParallelSentence>& corpus_l2,
                                   const Vocabulary& vocab_l2,
                                   const TrainConfig& config);

}  // namespace bimu
