#include "bimu/trainer.hpp"

#include <chrono>
#include <cstdio>
#include <random>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "bimu/math.hpp"
#include "bimu/model.hpp"
#include "bimu/sampler.hpp"

namespace bimu {

namespace {

constexpr double kNoisePower = 0.75;

struct InstanceStats {
  double objective = 0.0;
  std::uint64_t predictions = 0;
};

// One training step for one pivot occurrence. Hard updates fix the argmax
// sense for the whole instance and apply one AdaGrad step per target; soft
// updates apply a single step for the instance-level objective. Negative
// draws come from a generator derived from (seed, epoch, instance index), so
// the work done for an instance does not depend on thread scheduling.
class InstanceKernel {
 public:
  InstanceKernel(const TrainConfig& config, const NegativeSampler& sampler)
      : config_(config), sampler_(&sampler) {}

  InstanceStats process(const TrainingInstance& instance, int epoch,
                        EmbeddingBank& bank, AdaGradState& ada) {
    InstanceStats stats;
    if (instance.targets.empty()) return stats;
    std::mt19937_64 rng(mix_seed(config_.seed, 0xadd1c7 + static_cast<std::uint64_t>(epoch),
                                 instance.index));
    negatives_.clear();
    for (std::size_t t = 0; t < instance.targets.size(); ++t) {
      for (int k = 0; k < config_.negatives; ++k) {
        negatives_.push_back(sampler_->sample(rng));
      }
    }
    stats.predictions = instance.targets.size();

    if (config_.hard_updates) {
      int sense = 0;
      if (config_.mode != Mode::kSg && bank.senses > 1) {
        encode_posterior(bank, instance.pivot, instance.context,
                         instance.foreign, config_.lambda, posterior_);
        sense = posterior_.argmax();
      }
      for (std::size_t t = 0; t < instance.targets.size(); ++t) {
        grads_.clear();
        stats.objective += grads_hard(
            bank, instance.pivot, sense, instance.targets[t],
            std::span<const WordId>(negatives_).subspan(t * config_.negatives,
                                                        config_.negatives),
            grads_);
        adagrad_apply(ada, grads_, bank);
      }
    } else {
      SoftGradOptions options;
      options.lambda = config_.lambda;
      options.lambda_h = config_.lambda_h;
      options.backprop_encoder = config_.soft_backprop_encoder;
      grads_.clear();
      stats.objective += grads_soft(bank, instance.pivot, instance.context,
                                    instance.foreign, instance.targets,
                                    negatives_, config_.negatives, options,
                                    grads_);
      adagrad_apply(ada, grads_, bank);
    }
    return stats;
  }

 private:
  TrainConfig config_;
  const NegativeSampler* sampler_;
  std::vector<WordId> negatives_;
  SensePosterior posterior_;
  SparseGrads grads_;
};

}  // namespace

TrainResult train(const std::vector<ParallelSentence>& corpus,
                  const Vocabulary& vocab, const TrainConfig& config_in,
                  const ForeignEmbeddings* foreign) {
  const TrainConfig config = validated(config_in);
  if (config.mode == Mode::kBiMu) {
    if (foreign == nullptr || foreign->table.empty()) {
      throw UsageError("bimu mode requires pretrained second-language "
                       "embeddings (--foreign-emb)");
    }
    if (foreign->dim != config.dim) {
      throw UsageError("foreign embedding dimension " +
                       std::to_string(foreign->dim) + " does not match --dim " +
                       std::to_string(config.dim));
    }
    bool any_alignment = false;
    for (const ParallelSentence& sentence : corpus) {
      if (!sentence.alignment.empty()) {
        any_alignment = true;
        break;
      }
    }
    if (!any_alignment) {
      throw UsageError("bimu mode requires a word-aligned parallel corpus "
                       "(--corpus-b and --alignments)");
    }
  }

  TrainResult result;
  result.bank = init_bank(static_cast<std::int64_t>(vocab.size()),
                          config.senses, config.dim, config.seed);
  if (foreign != nullptr && config.mode == Mode::kBiMu) {
    result.bank.gamma2 = foreign->table;
    result.bank.foreign_vocab_size =
        static_cast<std::int64_t>(foreign->vocab.size());
  }
  AdaGradState ada(result.bank.vocab_size, config.senses, config.dim, config.lr);
  NegativeSampler sampler(vocab.counts(), kNoisePower, config.seed);
  BatchStream stream(corpus, vocab, config, config.seed);

  TrainReport& report = result.report;
  report.mode = config.mode;
  report.hard_updates = config.hard_updates;
  report.config = config;

  const auto start = std::chrono::steady_clock::now();
  std::vector<TrainingInstance> batch;
  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    stream.start_epoch(epoch);
    double objective = 0.0;
    std::uint64_t predictions = 0, instances = 0;
    if (config.threads <= 1) {
      InstanceKernel kernel(config, sampler);
      while (stream.next_batch(batch)) {
        for (const TrainingInstance& instance : batch) {
          const InstanceStats stats =
              kernel.process(instance, epoch, result.bank, ada);
          objective += stats.objective;
          predictions += stats.predictions;
        }
        instances += batch.size();
      }
    } else {
#ifdef _OPENMP
      while (stream.next_batch(batch)) {
        const auto n = static_cast<std::int64_t>(batch.size());
#pragma omp parallel num_threads(config.threads) reduction(+ : objective, predictions)
        {
          InstanceKernel kernel(config, sampler);
#pragma omp for schedule(static)
          for (std::int64_t i = 0; i < n; ++i) {
            const InstanceStats stats =
                kernel.process(batch[static_cast<std::size_t>(i)], epoch,
                               result.bank, ada);
            objective += stats.objective;
            predictions += stats.predictions;
          }
        }
        instances += batch.size();
      }
#else
      InstanceKernel kernel(config, sampler);
      while (stream.next_batch(batch)) {
        for (const TrainingInstance& instance : batch) {
          const InstanceStats stats =
              kernel.process(instance, epoch, result.bank, ada);
          objective += stats.objective;
          predictions += stats.predictions;
        }
        instances += batch.size();
      }
#endif
    }
    report.epoch_objective.push_back(
        predictions > 0 ? objective / static_cast<double>(predictions) : 0.0);
    report.epoch_instances.push_back(instances);
    report.epoch_predictions.push_back(predictions);
    report.instances += instances;
    if (config.verbose) {
      const double elapsed =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
              .count();
      std::fprintf(stderr,
                   "[train] %s epoch %d/%d objective %.6f instances %llu (%.1fs)\n",
                   to_string(config.mode).c_str(), epoch + 1, config.epochs,
                   report.epoch_objective.back(),
                   static_cast<unsigned long long>(instances), elapsed);
    }
  }
  result.report.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  return result;
}

ForeignEmbeddings pretrain_foreign(const std::vector<ParallelSentence>& corpus_l2,
                                   const Vocabulary& vocab_l2,
                                   const TrainConfig& config_in) {
  TrainConfig config = config_in;
  config.mode = Mode::kSg;
  config.senses = 1;
  config.lambda = 0.0;
  config.hard_updates = true;
  TrainResult result = train(corpus_l2, vocab_l2, config);
  ForeignEmbeddings foreign;
  foreign.vocab = vocab_l2;
  foreign.dim = config.dim;
  foreign.table = std::move(result.bank.gamma);
  // Remove the table's common direction. Freshly trained tables carry a large
  // shared component; inside the encoder it acts as a context-independent
  // per-sense bias, drowning out what actually discriminates the contexts.
  std::vector<double> mean(static_cast<std::size_t>(config.dim), 0.0);
  const std::size_t rows = vocab_l2.size();
  for (std::size_t w = 0; w < rows; ++w) {
    for (int i = 0; i < config.dim; ++i) {
      mean[static_cast<std::size_t>(i)] +=
          foreign.table[w * static_cast<std::size_t>(config.dim) + i];
    }
  }
  for (double& v : mean) v /= static_cast<double>(rows);
  for (std::size_t w = 0; w < rows; ++w) {
    for (int i = 0; i < config.dim; ++i) {
      foreign.table[w * static_cast<std::size_t>(config.dim) + i] -=
          mean[static_cast<std::size_t>(i)];
    }
  }
  return foreign;
}

}  // namespace bimu
