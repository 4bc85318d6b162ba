#include "synthetic.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <random>

#include "bimu/math.hpp"
#include "bimu/model.hpp"

namespace bimu::testsupport {

RawCorpus make_topic_corpus(std::size_t sentences, int topics, int words_per_topic,
                            int sentence_len, bool parallel, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<double> word_weights(static_cast<std::size_t>(words_per_topic));
  for (int r = 0; r < words_per_topic; ++r) {
    word_weights[static_cast<std::size_t>(r)] = 1.0 / (1.0 + r);
  }
  std::discrete_distribution<int> word_dist(word_weights.begin(), word_weights.end());
  std::uniform_int_distribution<int> topic_dist(0, topics - 1);

  RawCorpus corpus;
  corpus.side_a.resize(sentences);
  if (parallel) {
    corpus.side_b.resize(sentences);
    corpus.alignments.resize(sentences);
  }
  for (std::size_t s = 0; s < sentences; ++s) {
    const int topic = topic_dist(rng);
    for (int p = 0; p < sentence_len; ++p) {
      const int w = word_dist(rng);
      const std::string word =
          "w" + std::to_string(topic) + "_" + std::to_string(w);
      corpus.side_a[s].push_back(word);
      if (parallel) {
        corpus.side_b[s].push_back("t" + word);
        corpus.alignments[s].add(p, p);
      }
    }
  }
  return corpus;
}

namespace {

HomonymCorpus make_homonym_impl(int homonyms, std::size_t sentence_pairs,
                                int topic_vocab, int pool_size,
                                std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> hom_dist(0, homonyms - 1);
  std::uniform_int_distribution<int> sense_dist(0, 1);
  std::uniform_int_distribution<int> len_dist(4, 12);
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  std::vector<double> weights(static_cast<std::size_t>(topic_vocab));
  for (int r = 0; r < topic_vocab; ++r) {
    weights[static_cast<std::size_t>(r)] = 1.0 / (1.0 + r);
  }
  std::discrete_distribution<int> topic_dist(weights.begin(), weights.end());
  std::uniform_int_distribution<int> pool_dist(0, std::max(pool_size - 1, 0));

  HomonymCorpus out;
  out.raw.side_a.resize(sentence_pairs);
  out.raw.side_b.resize(sentence_pairs);
  out.raw.alignments.resize(sentence_pairs);
  for (int h = 0; h < homonyms; ++h) {
    out.homonym_words.push_back("hom" + std::to_string(h));
  }
  for (std::size_t s = 0; s < sentence_pairs; ++s) {
    const int h = hom_dist(rng);
    const int sense = sense_dist(rng);
    const int len = len_dist(rng);
    std::uniform_int_distribution<int> pos_dist(0, len - 1);
    const int pivot_pos = pos_dist(rng);
    for (int p = 0; p < len; ++p) {
      if (p == pivot_pos) {
        out.raw.side_a[s].push_back(out.homonym_words[static_cast<std::size_t>(h)]);
        // The translation resolves the sense.
        out.raw.side_b[s].push_back("trans" + std::to_string(h) + "_" +
                                    std::to_string(sense));
      } else {
        std::string word;
        if (pool_size > 0 && coin(rng) < 0.5) {
          word = "pv" + std::to_string(h) + "_" + std::to_string(sense) + "_" +
                 std::to_string(pool_dist(rng));
        } else {
          word = "top" + std::to_string(sense) + "_" +
                 std::to_string(topic_dist(rng));
        }
        out.raw.side_a[s].push_back(word);
        out.raw.side_b[s].push_back("t" + word);
      }
      out.raw.alignments[s].add(p, p);
    }
    out.occurrences.push_back(
        {s, static_cast<std::size_t>(pivot_pos), h, sense});
  }
  return out;
}

}  // namespace

HomonymCorpus make_homonym_corpus(int homonyms, std::size_t sentence_pairs,
                                  int topic_vocab, std::uint64_t seed) {
  return make_homonym_impl(homonyms, sentence_pairs, topic_vocab, 0, seed);
}

HomonymCorpus make_homonym_corpus_private(int homonyms, std::size_t sentence_pairs,
                                          int topic_vocab, int pool_size,
                                          std::uint64_t seed) {
  return make_homonym_impl(homonyms, sentence_pairs, topic_vocab, pool_size, seed);
}

Vocabulary vocab_from_sentences(const std::vector<std::vector<std::string>>& sentences,
                                std::int64_t min_count) {
  VocabBuilder builder;
  for (const auto& sentence : sentences) {
    for (const std::string& token : sentence) builder.add(token);
  }
  return builder.build(min_count);
}

std::vector<ParallelSentence> encode_corpus(const RawCorpus& raw,
                                            const Vocabulary& vocab_a,
                                            const Vocabulary* vocab_b) {
  std::vector<ParallelSentence> corpus(raw.side_a.size());
  for (std::size_t s = 0; s < raw.side_a.size(); ++s) {
    for (const std::string& token : raw.side_a[s]) {
      corpus[s].tokens_l.push_back(vocab_a.id(token));
    }
    if (vocab_b != nullptr && s < raw.side_b.size()) {
      for (const std::string& token : raw.side_b[s]) {
        corpus[s].tokens_l2.push_back(vocab_b->id(token));
      }
      corpus[s].alignment = raw.alignments[s];
    }
  }
  return corpus;
}

void write_sentences(const std::filesystem::path& path,
                     const std::vector<std::vector<std::string>>& sentences) {
  std::ofstream out(path);
  for (const auto& sentence : sentences) {
    for (std::size_t i = 0; i < sentence.size(); ++i) {
      if (i > 0) out << ' ';
      out << sentence[i];
    }
    out << '\n';
  }
}

void write_alignments(const std::filesystem::path& path,
                      const std::vector<AlignmentMap>& alignments) {
  std::ofstream out(path);
  for (const AlignmentMap& alignment : alignments) {
    bool first = true;
    for (const auto& [i, j] : alignment.links()) {
      if (!first) out << ' ';
      out << i << '-' << j;
      first = false;
    }
    out << '\n';
  }
}

double assignment_purity(const EmbeddingBank& bank,
                         const std::vector<ParallelSentence>& corpus,
                         const std::vector<HomonymOccurrence>& occurrences,
                         int homonyms, double lambda, int window_n, int window_m) {
  // table[homonym][assigned sense][gold sense]
  const int senses = bank.senses;
  std::vector<std::vector<std::vector<std::int64_t>>> table(
      static_cast<std::size_t>(homonyms),
      std::vector<std::vector<std::int64_t>>(
          static_cast<std::size_t>(senses), std::vector<std::int64_t>(2, 0)));
  for (const HomonymOccurrence& occ : occurrences) {
    const ParallelSentence& sentence = corpus[occ.sentence];
    const WordId pivot = sentence.tokens_l[occ.position];
    const std::vector<WordId> context =
        extract_context(sentence.tokens_l, occ.position, window_n);
    std::vector<WordId> foreign;
    if (lambda > 0.0 && !sentence.tokens_l2.empty()) {
      const auto affiliated =
          affiliation_index(sentence.alignment, static_cast<int>(occ.position));
      foreign = foreign_context(sentence.tokens_l2, affiliated, window_m);
    }
    const SensePosterior q =
        encode_posterior(bank, pivot, context, foreign, lambda);
    table[static_cast<std::size_t>(occ.homonym)]
         [static_cast<std::size_t>(q.argmax())]
         [static_cast<std::size_t>(occ.sense)] += 1;
  }
  double purity_sum = 0.0;
  for (int h = 0; h < homonyms; ++h) {
    std::int64_t pure = 0, total = 0;
    for (int s = 0; s < senses; ++s) {
      const auto& row = table[static_cast<std::size_t>(h)][static_cast<std::size_t>(s)];
      pure += std::max(row[0], row[1]);
      total += row[0] + row[1];
    }
    purity_sum += total > 0 ? static_cast<double>(pure) / static_cast<double>(total)
                            : 0.0;
  }
  return purity_sum / static_cast<double>(homonyms);
}

TempDir::TempDir(const std::string& prefix) {
  std::mt19937_64 rng(std::random_device{}());
  const auto base = std::filesystem::temp_directory_path();
  for (int attempt = 0; attempt < 64; ++attempt) {
    auto candidate = base / (prefix + "-" + std::to_string(rng()));
    std::error_code ec;
    if (std::filesystem::create_directory(candidate, ec)) {
      path_ = candidate;
      return;
    }
  }
  throw std::runtime_error("could not create a scratch directory");
}

TempDir::~TempDir() {
  std::error_code ec;
  std::filesystem::remove_all(path_, ec);
}

}  // namespace bimu::testsupport
