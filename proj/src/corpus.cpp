#include "bimu/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <iostream>
#include <sstream>

namespace bimu {

void AlignmentMap::add(int l_index, int l2_index) {
  links_.emplace_back(l_index, l2_index);
  dirty_ = true;
}

void AlignmentMap::normalize() const {
  if (!dirty_) return;
  std::sort(links_.begin(), links_.end());
  links_.erase(std::unique(links_.begin(), links_.end()), links_.end());
  dirty_ = false;
}

int AlignmentMap::max_l_index() const {
  normalize();
  int best = -1;
  for (const auto& [i, j] : links_) best = std::max(best, i);
  return best;
}

int AlignmentMap::max_l2_index() const {
  normalize();
  int best = -1;
  for (const auto& [i, j] : links_) best = std::max(best, j);
  return best;
}

std::optional<int> affiliation_index(const AlignmentMap& alignment, int l_index) {
  // links() is sorted by (i, j), so the targets of l_index come out ascending.
  std::vector<int> targets;
  for (const auto& [i, j] : alignment.links()) {
    if (i == l_index) targets.push_back(j);
  }
  if (targets.empty()) return std::nullopt;
  return targets[(targets.size() - 1) / 2];
}

void extract_context(std::span<const WordId> sentence, std::size_t pivot,
                     int half_window, std::vector<WordId>& out) {
  out.clear();
  const std::size_t lo =
      pivot >= static_cast<std::size_t>(half_window) ? pivot - half_window : 0;
  const std::size_t hi =
      std::min(sentence.size(), pivot + static_cast<std::size_t>(half_window) + 1);
  for (std::size_t p = lo; p < hi; ++p) {
    if (p == pivot) continue;
    if (sentence[p] != kOov) out.push_back(sentence[p]);
  }
}

std::vector<WordId> extract_context(std::span<const WordId> sentence,
                                    std::size_t pivot, int half_window) {
  std::vector<WordId> out;
  extract_context(sentence, pivot, half_window, out);
  return out;
}

void foreign_context(std::span<const WordId> sentence_l2,
                     std::optional<int> affiliated, int half_window_m,
                     std::vector<WordId>& out) {
  out.clear();
  if (!affiliated.has_value()) return;
  std::size_t lo = 0, hi = sentence_l2.size();
  if (half_window_m != kInfiniteWindow) {
    const auto a = static_cast<std::size_t>(*affiliated);
    lo = a >= static_cast<std::size_t>(half_window_m) ? a - half_window_m : 0;
    hi = std::min(sentence_l2.size(),
                  a + static_cast<std::size_t>(half_window_m) + 1);
  }
  for (std::size_t p = lo; p < hi; ++p) {
    if (sentence_l2[p] != kOov) out.push_back(sentence_l2[p]);
  }
}

std::vector<WordId> foreign_context(std::span<const WordId> sentence_l2,
                                    std::optional<int> affiliated,
                                    int half_window_m) {
  std::vector<WordId> out;
  foreign_context(sentence_l2, affiliated, half_window_m, out);
  return out;
}

std::vector<std::string> tokenize(const std::string& line, bool lowercase) {
  std::vector<std::string> tokens;
  std::istringstream stream(line);
  std::string token;
  while (stream >> token) {
    if (lowercase) {
      std::transform(token.begin(), token.end(), token.begin(),
                     [](unsigned char c) { return std::tolower(c); });
    }
    tokens.push_back(std::move(token));
  }
  return tokens;
}

void for_each_token(const std::string& path, bool lowercase,
                    const std::function<void(std::string_view)>& fn) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open corpus file: " + path);
  std::string line;
  while (std::getline(in, line)) {
    for (const std::string& token : tokenize(line, lowercase)) fn(token);
  }
}

AlignmentMap parse_alignment_line(const std::string& line, std::size_t line_no) {
  AlignmentMap map;
  std::istringstream stream(line);
  std::string pair;
  while (stream >> pair) {
    int i = 0, j = 0;
    const char* begin = pair.data();
    const char* end = pair.data() + pair.size();
    auto [ptr, ec] = std::from_chars(begin, end, i);
    if (ec != std::errc() || ptr == end || *ptr != '-') {
      throw DataError("malformed alignment pair '" + pair + "' at line " +
                      std::to_string(line_no));
    }
    auto [ptr2, ec2] = std::from_chars(ptr + 1, end, j);
    if (ec2 != std::errc() || ptr2 != end || i < 0 || j < 0) {
      throw DataError("malformed alignment pair '" + pair + "' at line " +
                      std::to_string(line_no));
    }
    map.add(i, j);
  }
  return map;
}

namespace {

std::vector<WordId> encode_tokens(const std::vector<std::string>& tokens,
                                  const Vocabulary& vocab) {
  std::vector<WordId> ids;
  ids.reserve(tokens.size());
  for (const std::string& token : tokens) ids.push_back(vocab.id(token));
  return ids;
}

}  // namespace

std::vector<ParallelSentence> read_mono_corpus(const std::string& path,
                                               const Vocabulary& vocab,
                                               bool lowercase) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open corpus file: " + path);
  std::vector<ParallelSentence> sentences;
  std::string line;
  while (std::getline(in, line)) {
    ParallelSentence sentence;
    sentence.tokens_l = encode_tokens(tokenize(line, lowercase), vocab);
    sentences.push_back(std::move(sentence));
  }
  return sentences;
}

ParallelCorpus read_parallel_corpus(const std::string& path_a,
                                    const std::string& path_b,
                                    const std::string& alignments_path,
                                    const Vocabulary& vocab_a,
                                    const Vocabulary& vocab_b, bool lowercase) {
  std::ifstream in_a(path_a);
  if (!in_a) throw DataError("cannot open corpus file: " + path_a);
  std::ifstream in_b(path_b);
  if (!in_b) throw DataError("cannot open corpus file: " + path_b);
  std::ifstream in_align(alignments_path);
  if (!in_align) throw DataError("cannot open alignment file: " + alignments_path);

  ParallelCorpus corpus;
  std::string line_a, line_b, line_align;
  std::size_t line_no = 0;
  while (true) {
    const bool got_a = static_cast<bool>(std::getline(in_a, line_a));
    const bool got_b = static_cast<bool>(std::getline(in_b, line_b));
    const bool got_align = static_cast<bool>(std::getline(in_align, line_align));
    if (!got_a && !got_b && !got_align) break;
    ++line_no;
    if (!got_a || !got_b || !got_align) {
      throw DataError("line counts differ between corpus sides and alignments "
                      "(first divergence at line " + std::to_string(line_no) + ")");
    }
    ParallelSentence sentence;
    sentence.tokens_l = encode_tokens(tokenize(line_a, lowercase), vocab_a);
    sentence.tokens_l2 = encode_tokens(tokenize(line_b, lowercase), vocab_b);
    sentence.alignment = parse_alignment_line(line_align, line_no);
    if (sentence.alignment.max_l_index() >=
            static_cast<int>(sentence.tokens_l.size()) ||
        sentence.alignment.max_l2_index() >=
            static_cast<int>(sentence.tokens_l2.size())) {
      ++corpus.skipped_pairs;
      continue;
    }
    corpus.sentences.push_back(std::move(sentence));
  }
  if (corpus.skipped_pairs > 0) {
    std::cerr << "[corpus] skipped " << corpus.skipped_pairs
              << " sentence pair(s) with out-of-range alignments\n";
  }
  return corpus;
}

}  // namespace bimu
