#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "bimu/types.hpp"
#include "bimu/vocab.hpp"

namespace bimu {

// Word alignment links for one sentence pair, 0-based, first index on the
// l side. Duplicate links collapse to one.
class AlignmentMap {
 public:
  void add(int l_index, int l2_index);
  bool empty() const { return links_.empty(); }
  std::size_t size() const {
    normalize();
    return links_.size();
  }
  // Sorted and de-duplicated.
  std::span<const std::pair<int, int>> links() const {
    normalize();
    return links_;
  }
  int max_l_index() const;
  int max_l2_index() const;

 private:
  mutable std::vector<std::pair<int, int>> links_;
  mutable bool dirty_ = false;
  void normalize() const;
};

struct ParallelSentence {
  std::vector<WordId> tokens_l;
  std::vector<WordId> tokens_l2;
  AlignmentMap alignment;
};

struct ContextSpec {
  int n = 5;                  // first-language half window
  int m = 5;                  // second-language half window, kInfiniteWindow for inf
  void validate() const {
    if (n < 1) throw UsageError("--window-n must be at least 1");
    if (m < 0 && m != kInfiniteWindow) {
      throw UsageError("--window-m must be >= 0 or inf");
    }
  }
};

// Context multiset C_i: up to 2n ids around the pivot, truncated at sentence
// boundaries; the pivot slot itself and OOV slots are excluded.
std::vector<WordId> extract_context(std::span<const WordId> sentence,
                                    std::size_t pivot, int half_window);
void extract_context(std::span<const WordId> sentence, std::size_t pivot,
                     int half_window, std::vector<WordId>& out);

// Second-language index a_i affiliated with l-side position i:
// one link -> its target; several links -> the middle target (rounding
// down); no link -> absent.
std::optional<int> affiliation_index(const AlignmentMap& alignment, int l_index);

// Foreign context C'_i around and including the affiliated position. An
// absent affiliation yields the empty multiset; m == kInfiniteWindow takes
// the whole sentence. OOV slots are excluded.
std::vector<WordId> foreign_context(std::span<const WordId> sentence_l2,
                                    std::optional<int> affiliated, int half_window_m);
void foreign_context(std::span<const WordId> sentence_l2,
                     std::optional<int> affiliated, int half_window_m,
                     std::vector<WordId>& out);

// --- plain-text ingestion -------------------------------------------------

// Whitespace tokenization; optional ASCII lowercasing (the single global
// casing policy, applied identically at training and evaluation time).
std::vector<std::string> tokenize(const std::string& line, bool lowercase);

// Streams every token of a one-sentence-per-line file.
void for_each_token(const std::string& path, bool lowercase,
                    const std::function<void(std::string_view)>& fn);

// Pharaoh `i-j` pairs; empty line means no links. Malformed tokens raise
// DataError naming the line.
AlignmentMap parse_alignment_line(const std::string& line, std::size_t line_no);

// Monolingual corpus: one ParallelSentence per line, l2 side empty.
std::vector<ParallelSentence> read_mono_corpus(const std::string& path,
                                               const Vocabulary& vocab,
                                               bool lowercase);

struct ParallelCorpus {
  std::vector<ParallelSentence> sentences;
  std::size_t skipped_pairs = 0;  // pairs rejected for out-of-range alignments
};

// Line k of path_a is parallel to line k of path_b; alignments are Pharaoh
// format with the first index on the A side. Pairs whose alignment points
// outside either sentence are skipped and counted, never fatal.
ParallelCorpus read_parallel_corpus(const std::string& path_a,
                                    const std::string& path_b,
                                    const std::string& alignments_path,
                                    const Vocabulary& vocab_a,
                                    const Vocabulary& vocab_b, bool lowercase);

}  // namespace bimu
