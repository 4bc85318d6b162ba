#include "bimu/eval.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>

#include "bimu/corpus.hpp"
#include "bimu/inference.hpp"
#include "bimu/math.hpp"

namespace bimu {

namespace {

// Fractional ranks, ties averaged.
std::vector<double> average_ranks(std::span<const double> xs) {
  const std::size_t n = xs.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return xs[a] < xs[b]; });
  std::vector<double> ranks(n);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && xs[order[j + 1]] == xs[order[i]]) ++j;
    const double rank = 0.5 * (static_cast<double>(i) + static_cast<double>(j)) + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = rank;
    i = j + 1;
  }
  return ranks;
}

double pearson(std::span<const double> xs, std::span<const double> ys) {
  const auto n = static_cast<double>(xs.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double dx = xs[i] - mx;
    const double dy = ys[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0) {
    throw DataError("spearman undefined for a constant input vector");
  }
  return sxy / (std::sqrt(sxx) * std::sqrt(syy));
}

double parse_score(const std::string& field, const std::string& path,
                   std::size_t line_no) {
  try {
    std::size_t pos = 0;
    const double value = std::stod(field, &pos);
    if (pos != field.size()) throw std::invalid_argument(field);
    return value;
  } catch (const std::exception&) {
    throw DataError(path + ":" + std::to_string(line_no) +
                    ": malformed score '" + field + "'");
  }
}

std::vector<std::string> split_tabs(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t tab = line.find('\t', start);
    if (tab == std::string::npos) {
      fields.push_back(line.substr(start));
      break;
    }
    fields.push_back(line.substr(start, tab - start));
    start = tab + 1;
  }
  return fields;
}

// Locates the <b>word</b> marker, strips the tags and returns the cleaned
// token sequence with the pivot position.
PivotContext parse_marked_context(const std::string& text, bool lowercase,
                                  const std::string& path, std::size_t line_no) {
  PivotContext out;
  bool found = false;
  bool pending = false;  // a bare "<b>" token marks the next word
  for (std::string& token : tokenize(text, false)) {
    if (token == "<b>") {
      pending = true;
      continue;
    }
    if (token == "</b>") continue;
    bool is_pivot = pending;
    pending = false;
    if (token.starts_with("<b>")) {
      token = token.substr(3);
      is_pivot = true;
    }
    if (token.ends_with("</b>")) {
      token = token.substr(0, token.size() - 4);
      is_pivot = true;
    }
    if (token.empty()) continue;
    if (lowercase) {
      std::transform(token.begin(), token.end(), token.begin(),
                     [](unsigned char c) { return std::tolower(c); });
    }
    if (is_pivot) {
      if (found) {
        throw DataError(path + ":" + std::to_string(line_no) +
                        ": more than one <b>...</b> pivot marker");
      }
      found = true;
      out.pivot_pos = out.tokens.size();
    }
    out.tokens.push_back(std::move(token));
  }
  if (!found) {
    throw DataError(path + ":" + std::to_string(line_no) +
                    ": context lacks a <b>...</b> pivot marker");
  }
  return out;
}

std::string lowercased(std::string s, bool lowercase) {
  if (lowercase) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return std::tolower(c); });
  }
  return s;
}

// The marker scheme from tokenize() keeps <b> inside tokens; a separately
// tokenized pivot word like "<b> bank </b>" also parses, see above.
std::vector<WordId> encode(const std::vector<std::string>& tokens,
                           const Vocabulary& vocab) {
  std::vector<WordId> ids;
  ids.reserve(tokens.size());
  for (const std::string& token : tokens) ids.push_back(vocab.id(token));
  return ids;
}

double quantile(std::span<const double> sorted, double p) {
  if (sorted.size() == 1) return sorted[0];
  const double h = p * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const auto hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

bool constant(std::span<const double> xs) {
  return std::adjacent_find(xs.begin(), xs.end(),
                            std::not_equal_to<>()) == xs.end();
}

}  // namespace

double spearman(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size()) {
    throw DataError("spearman: input lengths differ");
  }
  if (xs.size() < 2) throw DataError("spearman: need at least 2 points");
  const std::vector<double> rx = average_ranks(xs);
  const std::vector<double> ry = average_ranks(ys);
  return pearson(rx, ry);
}

std::vector<WordPairItem> load_pair_file(const std::string& path, bool lowercase) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open dataset: " + path);
  std::vector<WordPairItem> items;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    const std::vector<std::string> fields = split_tabs(line);
    if (fields.size() != 3) {
      throw DataError(path + ":" + std::to_string(line_no) +
                      ": expected word1<TAB>word2<TAB>score");
    }
    WordPairItem item;
    item.word1 = lowercased(fields[0], lowercase);
    item.word2 = lowercased(fields[1], lowercase);
    item.gold = parse_score(fields[2], path, line_no);
    items.push_back(std::move(item));
  }
  return items;
}

std::vector<WordPairItem> load_context_file(const std::string& path,
                                            bool lowercase) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open dataset: " + path);
  std::vector<WordPairItem> items;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    const std::vector<std::string> fields = split_tabs(line);
    if (fields.size() != 5) {
      throw DataError(path + ":" + std::to_string(line_no) +
                      ": expected word1<TAB>word2<TAB>score<TAB>context1<TAB>context2");
    }
    WordPairItem item;
    item.word1 = lowercased(fields[0], lowercase);
    item.word2 = lowercased(fields[1], lowercase);
    item.gold = parse_score(fields[2], path, line_no);
    item.context1 = parse_marked_context(fields[3], lowercase, path, line_no);
    item.context2 = parse_marked_context(fields[4], lowercase, path, line_no);
    items.push_back(std::move(item));
  }
  return items;
}

EvalResult eval_pairs(const EmbeddingBank& bank, const Vocabulary& vocab,
                      std::span<const WordPairItem> items,
                      std::optional<std::int64_t> restrict_top,
                      const std::string& benchmark) {
  EvalResult result;
  result.benchmark = benchmark;
  std::vector<double> gold, scores;
  for (const WordPairItem& item : items) {
    const WordId w1 = vocab.id(item.word1);
    const WordId w2 = vocab.id(item.word2);
    // Ids are ordered by training frequency, so "within the top N" is id < N.
    const bool usable =
        w1 != kOov && w2 != kOov &&
        (!restrict_top.has_value() || (w1 < *restrict_top && w2 < *restrict_top));
    if (!usable) {
      ++result.n_skipped;
      continue;
    }
    const auto r1 = uniform_representation(bank, w1);
    const auto r2 = uniform_representation(bank, w2);
    gold.push_back(item.gold);
    scores.push_back(cosine(r1.vector, r2.vector));
    ++result.n_used;
  }
  if (result.n_used < 2) {
    throw DataError("benchmark " + benchmark + ": fewer than 2 usable pairs (" +
                    std::to_string(result.n_skipped) + " skipped)");
  }
  result.rho = spearman(gold, scores);
  return result;
}

EvalResult eval_scws(const EmbeddingBank& bank, const Vocabulary& vocab,
                     std::span<const WordPairItem> items, int window_n,
                     const std::string& benchmark) {
  EvalResult result;
  result.benchmark = benchmark;
  std::vector<double> gold, scores;
  for (const WordPairItem& item : items) {
    if (!item.context1.has_value() || !item.context2.has_value()) {
      throw DataError("benchmark " + benchmark + ": item lacks contexts");
    }
    const WordId w1 = vocab.id(item.word1);
    const WordId w2 = vocab.id(item.word2);
    if (w1 == kOov || w2 == kOov) {
      ++result.n_skipped;
      continue;
    }
    const std::vector<WordId> sent1 = encode(item.context1->tokens, vocab);
    const std::vector<WordId> sent2 = encode(item.context2->tokens, vocab);
    const std::vector<WordId> ctx1 =
        extract_context(sent1, item.context1->pivot_pos, window_n);
    const std::vector<WordId> ctx2 =
        extract_context(sent2, item.context2->pivot_pos, window_n);
    const auto r1 = contextual_representation(bank, w1, ctx1);
    const auto r2 = contextual_representation(bank, w2, ctx2);
    gold.push_back(item.gold);
    scores.push_back(cosine(r1.vector, r2.vector));
    ++result.n_used;
  }
  if (result.n_used < 2) {
    throw DataError("benchmark " + benchmark + ": fewer than 2 usable pairs (" +
                    std::to_string(result.n_skipped) + " skipped)");
  }
  result.rho = spearman(gold, scores);
  return result;
}

DiffCi bootstrap_diff_ci(std::span<const double> gold,
                         std::span<const double> scores_a,
                         std::span<const double> scores_b, int resamples,
                         double confidence, std::uint64_t seed) {
  if (resamples < 1) throw UsageError("--resamples must be at least 1");
  if (confidence < 0.0 || confidence >= 1.0) {
    throw UsageError("--confidence must lie in [0,1)");
  }
  const std::size_t n = gold.size();
  if (n < 2 || scores_a.size() != n || scores_b.size() != n) {
    throw DataError("bootstrap needs at least 2 aligned score triples");
  }
  DiffCi ci;
  ci.rho_a = spearman(gold, scores_a);
  ci.rho_b = spearman(gold, scores_b);
  ci.n_used = n;

  constexpr int kMaxRetries = 100;
  std::vector<double> diffs(static_cast<std::size_t>(resamples));
  bool failed = false;
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
  for (int r = 0; r < resamples; ++r) {
    // Each resample owns a generator derived from (seed, r): deterministic
    // under any thread count, and redraws stay self-contained.
    std::mt19937_64 rng(mix_seed(seed, 0xb0075ULL, static_cast<std::uint64_t>(r)));
    std::uniform_int_distribution<std::size_t> pick(0, n - 1);
    std::vector<double> g(n), sa(n), sb(n);
    bool ok = false;
    for (int attempt = 0; attempt < kMaxRetries && !ok; ++attempt) {
      for (std::size_t i = 0; i < n; ++i) {
        const std::size_t j = pick(rng);
        g[i] = gold[j];
        sa[i] = scores_a[j];
        sb[i] = scores_b[j];
      }
      ok = !constant(g) && !constant(sa) && !constant(sb);
    }
    if (!ok) {
      failed = true;
      continue;
    }
    diffs[static_cast<std::size_t>(r)] = spearman(g, sa) - spearman(g, sb);
  }
  if (failed) {
    throw DataError("bootstrap: degenerate resamples persisted after retries");
  }
  std::sort(diffs.begin(), diffs.end());
  const double alpha = (1.0 - confidence) / 2.0;
  ci.low = quantile(diffs, alpha);
  ci.high = quantile(diffs, 1.0 - alpha);
  return ci;
}

DiffCi correlation_diff_ci(const EmbeddingBank& bank_a, const Vocabulary& vocab_a,
                           const EmbeddingBank& bank_b, const Vocabulary& vocab_b,
                           std::span<const WordPairItem> items, int resamples,
                           double confidence, std::uint64_t seed) {
  std::vector<double> gold, scores_a, scores_b;
  std::size_t skipped = 0;
  for (const WordPairItem& item : items) {
    const WordId a1 = vocab_a.id(item.word1), a2 = vocab_a.id(item.word2);
    const WordId b1 = vocab_b.id(item.word1), b2 = vocab_b.id(item.word2);
    if (a1 == kOov || a2 == kOov || b1 == kOov || b2 == kOov) {
      ++skipped;
      continue;
    }
    gold.push_back(item.gold);
    scores_a.push_back(cosine(uniform_representation(bank_a, a1).vector,
                              uniform_representation(bank_a, a2).vector));
    scores_b.push_back(cosine(uniform_representation(bank_b, b1).vector,
                              uniform_representation(bank_b, b2).vector));
  }
  if (gold.size() < 2) {
    throw DataError("fewer than 2 pairs usable in both embedding banks");
  }
  DiffCi ci = bootstrap_diff_ci(gold, scores_a, scores_b, resamples, confidence, seed);
  ci.n_skipped = skipped;
  return ci;
}

}  // namespace bimu
