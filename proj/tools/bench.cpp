// Throughput benchmark: the serial reference trainer against the OpenMP
// lock-free path on one synthetic corpus. The serial run is the correctness
// baseline (bit-reproducible from the seed); parallel runs race on the
// parameter tables, so their objective may differ slightly.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <numeric>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "bimu/trainer.hpp"
#include "synthetic.hpp"

using namespace bimu;
namespace ts = bimu::testsupport;

namespace {

struct Row {
  int threads;
  double seconds;
  double predictions_per_sec;
  double objective;
};

std::uint64_t total_predictions(const TrainReport& report) {
  return std::accumulate(report.epoch_predictions.begin(),
                         report.epoch_predictions.end(), std::uint64_t{0});
}

}  // namespace

int main(int argc, char** argv) {
  std::size_t sentences = 20000;
  int epochs = 2;
  std::vector<int> thread_counts = {1, 2, 4};
  for (int i = 1; i + 1 < argc; i += 2) {
    const std::string flag = argv[i];
    if (flag == "--sentences") {
      sentences = static_cast<std::size_t>(std::atoll(argv[i + 1]));
    } else if (flag == "--epochs") {
      epochs = std::atoi(argv[i + 1]);
    } else if (flag == "--max-threads") {
      thread_counts.clear();
      for (int t = 1; t <= std::atoi(argv[i + 1]); t *= 2) {
        thread_counts.push_back(t);
      }
    } else {
      std::fprintf(stderr, "usage: bimu-bench [--sentences N] [--epochs E] "
                           "[--max-threads T]\n");
      return 1;
    }
  }
#ifndef _OPENMP
  std::fprintf(stderr, "built without OpenMP; only the serial path runs\n");
  thread_counts = {1};
#endif

#ifdef _OPENMP
  std::fprintf(stderr, "available processors: %d\n", omp_get_num_procs());
#endif
  std::fprintf(stderr, "generating %zu sentences...\n", sentences);
  const auto raw = ts::make_topic_corpus(sentences, 10, 40, 12, false, 7);
  const Vocabulary vocab = ts::vocab_from_sentences(raw.side_a, 5);
  const auto corpus = ts::encode_corpus(raw, vocab, nullptr);

  TrainConfig config;
  config.mode = Mode::kMu;
  config.lambda = 0.0;
  config.senses = 3;
  config.dim = 50;
  config.epochs = epochs;
  config.min_count = 5;
  config.verbose = false;

  std::vector<Row> rows;
  for (int threads : thread_counts) {
    config.threads = threads;
    const auto start = std::chrono::steady_clock::now();
    const TrainResult result = train(corpus, vocab, config);
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    const auto predictions = total_predictions(result.report);
    rows.push_back({threads, seconds,
                    static_cast<double>(predictions) / seconds,
                    result.report.epoch_objective.back()});
  }

  std::printf("%-8s %-10s %-14s %-12s %s\n", "threads", "seconds", "preds/sec",
              "objective", "speedup");
  const double base = rows.front().seconds;
  for (const Row& row : rows) {
    std::printf("%-8d %-10.2f %-14.0f %-12.5f %.2fx\n", row.threads,
                row.seconds, row.predictions_per_sec, row.objective,
                base / row.seconds);
  }
  return 0;
}
