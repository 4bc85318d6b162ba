#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <map>
#include <random>

#include "bimu/batch.hpp"
#include "bimu/sampler.hpp"
#include "doctest.h"
#include "synthetic.hpp"

using namespace bimu;

namespace {

TrainConfig stream_config() {
  TrainConfig config;
  config.mode = Mode::kMu;
  config.lambda = 0.0;
  config.window_n = 2;
  config.window_m = 1;
  config.batch_size = 1000;
  config.sample_factor = 1.0;  // keep probability 1 for every word
  config.min_count = 1;
  config.verbose = false;
  return config;
}

std::vector<TrainingInstance> drain(BatchStream& stream) {
  std::vector<TrainingInstance> all, batch;
  while (stream.next_batch(batch)) {
    all.insert(all.end(), batch.begin(), batch.end());
  }
  return all;
}

}  // namespace

TEST_CASE("negative sampler distribution") {
  const std::vector<std::int64_t> counts = {16, 1, 0, 1};
  NegativeSampler sampler(counts, 0.75, 42);
  SUBCASE("cumulative table sums to one") {
    CHECK(sampler.cumulative().back() == doctest::Approx(1.0).epsilon(1e-9));
  }
  SUBCASE("zero-count words are never drawn; frequencies track counts^power") {
    std::map<WordId, int> histogram;
    const int draws = 200000;
    for (int i = 0; i < draws; ++i) ++histogram[sampler.sample()];
    CHECK(histogram[2] == 0);
    // 16^0.75 = 8, so word 0 gets 8/10 of the mass.
    CHECK(histogram[0] > draws * 0.78);
    CHECK(histogram[0] < draws * 0.82);
    CHECK(histogram[1] > 0);
    CHECK(histogram[3] > 0);
  }
  SUBCASE("same seed gives the same stream") {
    NegativeSampler a(counts, 0.75, 7), b(counts, 0.75, 7);
    for (int i = 0; i < 100; ++i) CHECK(a.sample() == b.sample());
  }
}

TEST_CASE("batch stream partitions instances into batches") {
  // 500 sentences of 5 in-vocab tokens -> 2500 instances.
  std::vector<std::string> words = {"a", "b", "c", "d", "e"};
  std::vector<ParallelSentence> corpus(500);
  std::vector<std::string> stream_tokens;
  for (auto& sentence : corpus) {
    sentence.tokens_l = {0, 1, 2, 3, 4};
    for (const auto& w : words) stream_tokens.push_back(w);
  }
  const Vocabulary vocab = build_vocab(stream_tokens, 1);
  TrainConfig config = stream_config();
  BatchStream stream(corpus, vocab, config, 1);
  stream.start_epoch(0);
  std::vector<TrainingInstance> batch;
  std::vector<std::size_t> sizes;
  while (stream.next_batch(batch)) sizes.push_back(batch.size());
  CHECK(sizes == std::vector<std::size_t>{1000, 1000, 500});
  CHECK(stream.instances_emitted() == 2500);
}

TEST_CASE("instance count equals brute-force window enumeration") {
  const auto raw = testsupport::make_topic_corpus(300, 4, 12, 9, false, 77);
  const Vocabulary vocab = testsupport::vocab_from_sentences(raw.side_a, 1);
  const auto corpus = testsupport::encode_corpus(raw, vocab, nullptr);

  // Oracle: with subsampling off, every in-vocabulary token is one instance.
  std::uint64_t expected = 0;
  for (const auto& sentence : corpus) {
    for (WordId w : sentence.tokens_l) {
      if (w != kOov) ++expected;
    }
  }

  TrainConfig config = stream_config();
  BatchStream stream(corpus, vocab, config, 9);
  stream.start_epoch(0);
  const auto instances = drain(stream);
  CHECK(instances.size() == expected);

  // Targets mirror the l-side context.
  for (const auto& instance : instances) {
    CHECK(instance.targets == instance.context);
    CHECK(instance.context.size() <= 2 * static_cast<std::size_t>(config.window_n));
  }
}

TEST_CASE("same seed reproduces the instance stream") {
  const auto raw = testsupport::make_topic_corpus(200, 3, 10, 8, true, 5);
  const Vocabulary vocab_a = testsupport::vocab_from_sentences(raw.side_a, 1);
  const Vocabulary vocab_b = testsupport::vocab_from_sentences(raw.side_b, 1);
  const auto corpus = testsupport::encode_corpus(raw, vocab_a, &vocab_b);

  TrainConfig config = stream_config();
  config.sample_factor = 0.05;  // exercise the subsampling draws too

  BatchStream first(corpus, vocab_a, config, 31);
  BatchStream second(corpus, vocab_a, config, 31);
  first.start_epoch(2);
  second.start_epoch(2);
  const auto a = drain(first);
  const auto b = drain(second);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].pivot == b[i].pivot);
    CHECK(a[i].context == b[i].context);
    CHECK(a[i].foreign == b[i].foreign);
    CHECK(a[i].index == b[i].index);
  }

  BatchStream other(corpus, vocab_a, config, 32);
  other.start_epoch(2);
  const auto c = drain(other);
  bool identical = a.size() == c.size();
  if (identical) {
    for (std::size_t i = 0; i < a.size() && identical; ++i) {
      identical = a[i].pivot == c[i].pivot && a[i].context == c[i].context;
    }
  }
  CHECK_FALSE(identical);
}

TEST_CASE("foreign context follows the affiliation of the original position") {
  // One sentence: pivot 'b' at raw position 1 aligns to l2 position 2.
  std::vector<ParallelSentence> corpus(1);
  corpus[0].tokens_l = {0, 1, 2};
  corpus[0].tokens_l2 = {5, 6, 7};
  corpus[0].alignment.add(1, 2);
  const std::vector<std::string> words = {"a", "b", "c"};
  const Vocabulary vocab = build_vocab(words, 1);

  TrainConfig config = stream_config();
  config.window_m = 0;
  BatchStream stream(corpus, vocab, config, 3);
  stream.start_epoch(0);
  const auto instances = drain(stream);
  REQUIRE(instances.size() == 3);
  for (const auto& instance : instances) {
    if (instance.pivot == 1) {
      CHECK(instance.foreign == std::vector<WordId>{7});
    } else {
      CHECK(instance.foreign.empty());
    }
  }
}
