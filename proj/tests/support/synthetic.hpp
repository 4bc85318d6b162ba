#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "bimu/bank.hpp"
#include "bimu/corpus.hpp"
#include "bimu/vocab.hpp"

namespace bimu::testsupport {

// Token-level corpus with an optional word-translated second side and 1:1
// alignments.
struct RawCorpus {
  std::vector<std::vector<std::string>> side_a;
  std::vector<std::vector<std::string>> side_b;   // empty when monolingual
  std::vector<AlignmentMap> alignments;           // empty when monolingual
};

// Topic-structured text: each sentence draws its words from one topic block
// with a mildly skewed within-topic distribution, so co-occurrence carries
// signal. When `parallel` is set, side B is the word-for-word translation
// with diagonal alignments.
RawCorpus make_topic_corpus(std::size_t sentences, int topics, int words_per_topic,
                            int sentence_len, bool parallel, std::uint64_t seed);

// Homonym benchmark: every sentence pair contains exactly one homonym whose
// sense is drawn 50/50. Sense 0 contexts come from one topic vocabulary and
// sense 1 contexts from another, disjoint one (Zipf-weighted, variable
// sentence lengths), and the B side translates the homonym to a
// sense-specific word. Alignments are perfect 1:1.
struct HomonymOccurrence {
  std::size_t sentence = 0;
  std::size_t position = 0;
  int homonym = 0;
  int sense = 0;
};

struct HomonymCorpus {
  RawCorpus raw;
  std::vector<HomonymOccurrence> occurrences;
  std::vector<std::string> homonym_words;
};

HomonymCorpus make_homonym_corpus(int homonyms, std::size_t sentence_pairs,
                                  int topic_vocab, std::uint64_t seed);

// Harder variant: half of each context comes from a small pool private to
// (homonym, sense), halving the shared-topic evidence. Monolingual sense
// induction degrades here while the translation signal stays clean.
HomonymCorpus make_homonym_corpus_private(int homonyms, std::size_t sentence_pairs,
                                          int topic_vocab, int pool_size,
                                          std::uint64_t seed);

Vocabulary vocab_from_sentences(const std::vector<std::vector<std::string>>& sentences,
                                std::int64_t min_count);

std::vector<ParallelSentence> encode_corpus(const RawCorpus& raw,
                                            const Vocabulary& vocab_a,
                                            const Vocabulary* vocab_b);

void write_sentences(const std::filesystem::path& path,
                     const std::vector<std::vector<std::string>>& sentences);
void write_alignments(const std::filesystem::path& path,
                      const std::vector<AlignmentMap>& alignments);

// Cluster purity of argmax sense assignments over all occurrences of each
// homonym, averaged over homonyms. Contexts come from the raw sentences
// (no subsampling); `lambda` > 0 includes the second-language context.
double assignment_purity(const EmbeddingBank& bank,
                         const std::vector<ParallelSentence>& corpus,
                         const std::vector<HomonymOccurrence>& occurrences,
                         int homonyms, double lambda, int window_n, int window_m);

// Scratch directory removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& prefix);
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }
  std::string file(const std::string& name) const {
    return (path_ / name).string();
  }

 private:
  std::filesystem::path path_;
};

}  // namespace bimu::testsupport
