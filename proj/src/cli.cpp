#include "bimu/cli.hpp"

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "bimu/config.hpp"
#include "bimu/corpus.hpp"
#include "bimu/eval.hpp"
#include "bimu/inference.hpp"
#include "bimu/io.hpp"
#include "bimu/trainer.hpp"
#include "bimu/types.hpp"
#include "bimu/vocab.hpp"

namespace bimu {

namespace {

int parse_window_m(const std::string& text) {
  if (text == "inf") return kInfiniteWindow;
  try {
    std::size_t pos = 0;
    const int m = std::stoi(text, &pos);
    if (pos != text.size() || m < 0) throw std::invalid_argument(text);
    return m;
  } catch (const std::exception&) {
    throw UsageError("--window-m expects a non-negative integer or 'inf'");
  }
}

std::string benchmark_name(const std::string& path) {
  return std::filesystem::path(path).stem().string();
}

Vocabulary vocab_from_file(const std::string& path, std::int64_t min_count,
                           bool lowercase) {
  VocabBuilder builder;
  for_each_token(path, lowercase, [&](std::string_view token) { builder.add(token); });
  return builder.build(min_count);
}

struct TrainFlags {
  std::string mode = "bimu";
  std::string corpus_a, corpus_b, alignments, foreign_emb;
  std::string window_m = "5";
  std::string out, report;
  bool soft = false;
  bool keep_case = false;
  bool quiet = false;
  TrainConfig config;
};

void add_train_options(CLI::App* cmd, TrainFlags& flags, bool with_mode) {
  if (with_mode) {
    cmd->add_option("--mode", flags.mode, "Training mode: sg, mu or bimu")
        ->capture_default_str();
    cmd->add_option("--corpus-a", flags.corpus_a,
                    "First-language corpus, one sentence per line")
        ->required();
    cmd->add_option("--corpus-b", flags.corpus_b,
                    "Second-language side of the parallel corpus");
    cmd->add_option("--alignments", flags.alignments,
                    "Word alignments in Pharaoh i-j format, A side first");
    cmd->add_option("--foreign-emb", flags.foreign_emb,
                    "Pretrained second-language embeddings");
    cmd->add_option("--senses", flags.config.senses, "Sense vectors per word")
        ->capture_default_str();
    cmd->add_option("--window-m", flags.window_m,
                    "Second-language half window (integer or 'inf')")
        ->capture_default_str();
    cmd->add_option("--lambda", flags.config.lambda,
                    "Second-language weight in the sense encoder")
        ->capture_default_str();
    cmd->add_option("--lambda-h", flags.config.lambda_h,
                    "Entropy regularizer weight (soft updates)")
        ->capture_default_str();
    auto* hard = cmd->add_flag("--hard", "Update only the argmax sense (default)");
    cmd->add_flag("--soft", flags.soft, "Posterior-weighted soft updates")
        ->excludes(hard);
    cmd->add_flag("--soft-full-grad", flags.config.soft_backprop_encoder,
                  "Soft updates also follow the encoder path");
  } else {
    cmd->add_option("--corpus", flags.corpus_a,
                    "Monolingual text, one sentence per line")
        ->required();
  }
  cmd->add_option("--dim", flags.config.dim, "Embedding dimensionality")
      ->capture_default_str();
  cmd->add_option("--window-n", flags.config.window_n,
                  "First-language half window")
      ->capture_default_str();
  cmd->add_option("--negatives", flags.config.negatives,
                  "Negative samples per positive")
      ->capture_default_str();
  cmd->add_option("--lr", flags.config.lr, "Initial AdaGrad learning rate")
      ->capture_default_str();
  cmd->add_option("--batch", flags.config.batch_size, "Minibatch size")
      ->capture_default_str();
  cmd->add_option("--min-count", flags.config.min_count,
                  "Minimum corpus frequency for vocabulary words")
      ->capture_default_str();
  cmd->add_option("--sample", flags.config.sample_factor,
                  "Frequent-word subsampling factor")
      ->capture_default_str();
  cmd->add_option("--epochs", flags.config.epochs, "Training epochs")
      ->capture_default_str();
  cmd->add_option("--seed", flags.config.seed, "RNG seed")->capture_default_str();
  cmd->add_option("--threads", flags.config.threads,
                  "Worker threads; >1 trades determinism for speed")
      ->capture_default_str();
  cmd->add_flag("--keep-case", flags.keep_case,
                "Skip ASCII lowercasing of corpus and dataset tokens");
  cmd->add_flag("--quiet", flags.quiet, "Suppress progress logging");
  cmd->add_option("--out", flags.out,
                  "Output path ('.bin' selects the binary form)")
      ->required();
  cmd->add_option("--report", flags.report,
                  "Also write a key=value training report here");
}

TrainConfig finalize_config(TrainFlags& flags, bool with_mode) {
  flags.config.mode = with_mode ? mode_from_string(flags.mode) : Mode::kSg;
  flags.config.window_m = parse_window_m(flags.window_m);
  flags.config.hard_updates = !flags.soft;
  flags.config.lowercase = !flags.keep_case;
  flags.config.verbose = !flags.quiet;
  return validated(flags.config);
}

int cmd_train(TrainFlags& flags) {
  const TrainConfig config = finalize_config(flags, true);
  if (config.mode == Mode::kBiMu) {
    if (flags.corpus_b.empty()) throw UsageError("--mode bimu requires --corpus-b");
    if (flags.alignments.empty()) {
      throw UsageError("--mode bimu requires --alignments");
    }
    if (flags.foreign_emb.empty()) {
      throw UsageError("--mode bimu requires --foreign-emb");
    }
  }
  const Vocabulary vocab =
      vocab_from_file(flags.corpus_a, config.min_count, config.lowercase);
  if (config.verbose) {
    std::fprintf(stderr, "[train] vocabulary: %zu words, %llu tokens\n",
                 vocab.size(),
                 static_cast<unsigned long long>(vocab.total_tokens()));
  }

  TrainResult result;
  if (config.mode == Mode::kBiMu) {
    const ForeignEmbeddings foreign = load_foreign(flags.foreign_emb, config.dim);
    const ParallelCorpus corpus =
        read_parallel_corpus(flags.corpus_a, flags.corpus_b, flags.alignments,
                             vocab, foreign.vocab, config.lowercase);
    result = train(corpus.sentences, vocab, config, &foreign);
  } else {
    const std::vector<ParallelSentence> corpus =
        read_mono_corpus(flags.corpus_a, vocab, config.lowercase);
    result = train(corpus, vocab, config);
  }
  save_bank(result.bank, vocab, flags.out);
  if (!flags.report.empty()) write_report(result.report, flags.report);
  return 0;
}

int cmd_pretrain_foreign(TrainFlags& flags) {
  const TrainConfig config = finalize_config(flags, false);
  const Vocabulary vocab =
      vocab_from_file(flags.corpus_a, config.min_count, config.lowercase);
  const std::vector<ParallelSentence> corpus =
      read_mono_corpus(flags.corpus_a, vocab, config.lowercase);
  const ForeignEmbeddings foreign = pretrain_foreign(corpus, vocab, config);
  save_embeddings_text(foreign.vocab, foreign.table, foreign.dim, flags.out);
  return 0;
}

void print_eval_line(const EvalResult& result) {
  std::printf("benchmark=%s rho=%.6f used=%zu skipped=%zu\n",
              result.benchmark.c_str(), result.rho, result.n_used,
              result.n_skipped);
}

}  // namespace

int run_cli(int argc, const char* const* argv) {
  CLI::App app{"Multi-sense word embeddings with optional second-language "
               "supervision"};
  app.require_subcommand(1);
  app.failure_message(CLI::FailureMessage::simple);

  TrainFlags train_flags;
  CLI::App* train_cmd =
      app.add_subcommand("train", "Train an embedding bank on a corpus");
  add_train_options(train_cmd, train_flags, true);

  TrainFlags pretrain_flags;
  pretrain_flags.config.senses = 1;
  CLI::App* pretrain_cmd = app.add_subcommand(
      "pretrain-foreign",
      "Skip-Gram pretraining of second-language embeddings");
  add_train_options(pretrain_cmd, pretrain_flags, false);

  struct {
    std::string emb;
    std::vector<std::string> datasets;
    std::int64_t restrict_top = 0;
    bool keep_case = false;
  } pairs_flags;
  CLI::App* pairs_cmd = app.add_subcommand(
      "eval-pairs", "Spearman correlation on context-free word-pair files");
  pairs_cmd->add_option("--emb", pairs_flags.emb, "Embedding bank")->required();
  pairs_cmd->add_option("--dataset", pairs_flags.datasets,
                        "word1<TAB>word2<TAB>score file (repeatable; several "
                        "files also report their macro average)")
      ->required();
  pairs_cmd->add_option("--restrict-top", pairs_flags.restrict_top,
                        "Keep only pairs within the N most frequent words")
      ->capture_default_str();
  pairs_cmd->add_flag("--keep-case", pairs_flags.keep_case,
                      "Skip ASCII lowercasing of dataset words");

  struct {
    std::string emb, dataset;
    int window_n = 5;
    bool keep_case = false;
  } context_flags;
  CLI::App* context_cmd = app.add_subcommand(
      "eval-context", "Contextual similarity with sense weighting");
  context_cmd->add_option("--emb", context_flags.emb, "Embedding bank")->required();
  context_cmd
      ->add_option("--dataset", context_flags.dataset,
                   "word1<TAB>word2<TAB>score<TAB>context1<TAB>context2 file")
      ->required();
  context_cmd
      ->add_option("--window-n", context_flags.window_n,
                   "Half window around the marked pivot")
      ->capture_default_str();
  context_cmd->add_flag("--keep-case", context_flags.keep_case,
                        "Skip ASCII lowercasing of dataset tokens");

  struct {
    std::string emb_a, emb_b, dataset;
    int resamples = 1000;
    double confidence = 0.95;
    std::uint64_t seed = 1;
    bool keep_case = false;
  } diff_flags;
  CLI::App* diff_cmd = app.add_subcommand(
      "eval-diff", "Bootstrap confidence interval for a correlation difference");
  diff_cmd->add_option("--emb-a", diff_flags.emb_a, "First embedding bank")
      ->required();
  diff_cmd->add_option("--emb-b", diff_flags.emb_b, "Second embedding bank")
      ->required();
  diff_cmd->add_option("--dataset", diff_flags.dataset,
                       "word1<TAB>word2<TAB>score file")
      ->required();
  diff_cmd->add_option("--resamples", diff_flags.resamples, "Bootstrap resamples")
      ->capture_default_str();
  diff_cmd->add_option("--confidence", diff_flags.confidence,
                       "Interval mass, e.g. 0.95")
      ->capture_default_str();
  diff_cmd->add_option("--seed", diff_flags.seed, "RNG seed")->capture_default_str();
  diff_cmd->add_flag("--keep-case", diff_flags.keep_case,
                     "Skip ASCII lowercasing of dataset words");

  struct {
    std::string emb, word;
    int sense = -1;
    int k = 10;
  } neighbors_flags;
  CLI::App* neighbors_cmd =
      app.add_subcommand("neighbors", "Nearest words by cosine similarity");
  neighbors_cmd->add_option("--emb", neighbors_flags.emb, "Embedding bank")
      ->required();
  neighbors_cmd->add_option("--word", neighbors_flags.word, "Query word")
      ->required();
  neighbors_cmd->add_option("--sense", neighbors_flags.sense,
                            "Compare a single sense instead of the uniform "
                            "average");
  neighbors_cmd->add_option("--k", neighbors_flags.k, "Number of neighbors")
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (train_cmd->parsed()) return cmd_train(train_flags);
    if (pretrain_cmd->parsed()) return cmd_pretrain_foreign(pretrain_flags);
    if (pairs_cmd->parsed()) {
      const LoadedBank loaded = load_bank(pairs_flags.emb);
      std::optional<std::int64_t> restrict_top;
      if (pairs_flags.restrict_top > 0) restrict_top = pairs_flags.restrict_top;
      double rho_sum = 0.0;
      std::size_t used = 0, skipped = 0;
      for (const std::string& dataset : pairs_flags.datasets) {
        const auto items = load_pair_file(dataset, !pairs_flags.keep_case);
        const EvalResult result = eval_pairs(loaded.bank, loaded.vocab, items,
                                             restrict_top,
                                             benchmark_name(dataset));
        print_eval_line(result);
        rho_sum += result.rho;
        used += result.n_used;
        skipped += result.n_skipped;
      }
      if (pairs_flags.datasets.size() > 1) {
        std::printf("benchmark=macro-avg rho=%.6f used=%zu skipped=%zu\n",
                    rho_sum / static_cast<double>(pairs_flags.datasets.size()),
                    used, skipped);
      }
      return 0;
    }
    if (context_cmd->parsed()) {
      const LoadedBank loaded = load_bank(context_flags.emb);
      const auto items =
          load_context_file(context_flags.dataset, !context_flags.keep_case);
      print_eval_line(eval_scws(loaded.bank, loaded.vocab, items,
                                context_flags.window_n,
                                benchmark_name(context_flags.dataset)));
      return 0;
    }
    if (diff_cmd->parsed()) {
      const LoadedBank a = load_bank(diff_flags.emb_a);
      const LoadedBank b = load_bank(diff_flags.emb_b);
      const auto items =
          load_pair_file(diff_flags.dataset, !diff_flags.keep_case);
      const DiffCi ci =
          correlation_diff_ci(a.bank, a.vocab, b.bank, b.vocab, items,
                              diff_flags.resamples, diff_flags.confidence,
                              diff_flags.seed);
      std::printf("benchmark=%s rho_a=%.6f rho_b=%.6f diff_low=%.6f "
                  "diff_high=%.6f used=%zu skipped=%zu\n",
                  benchmark_name(diff_flags.dataset).c_str(), ci.rho_a, ci.rho_b,
                  ci.low, ci.high, ci.n_used, ci.n_skipped);
      return 0;
    }
    if (neighbors_cmd->parsed()) {
      const LoadedBank loaded = load_bank(neighbors_flags.emb);
      const WordId pivot = loaded.vocab.id(neighbors_flags.word);
      if (pivot == kOov) {
        throw DataError("unknown word: '" + neighbors_flags.word + "'");
      }
      std::optional<int> sense;
      if (neighbors_flags.sense >= 0) sense = neighbors_flags.sense;
      std::size_t degenerate = 0;
      const auto neighbors = nearest_neighbors(loaded.bank, pivot, sense,
                                               neighbors_flags.k, &degenerate);
      if (degenerate > 0) {
        std::fprintf(stderr,
                     "[neighbors] warning: %zu zero-vector comparisons scored "
                     "as 0\n",
                     degenerate);
      }
      for (const Neighbor& n : neighbors) {
        std::printf("%s %.6f\n", loaded.vocab.word(n.word).c_str(), n.cosine);
      }
      return 0;
    }
  } catch (const UsageError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  } catch (const DataError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 0;
}

}  // namespace bimu
