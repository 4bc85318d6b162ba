#pragma once

#include <cstdint>
#include <string>

#include "bimu/bank.hpp"
#include "bimu/trainer.hpp"
#include "bimu/types.hpp"
#include "bimu/vocab.hpp"

namespace bimu {

struct BankFileHeader {
  std::int64_t vocab_size = 0;
  int num_senses = 0;
  int dim = 0;
  int format_version = 1;
};

// Text form: header line `|V| S d`, then one `word sense v1 .. vd` line per
// (word, sense) in id order, then a `#gamma` marker followed by one
// `word v1 .. vd` line per word. Floats carry 17 significant digits, so a
// text round trip reproduces values exactly. gamma2 is frozen input and is
// not part of a saved bank.
void save_bank_text(const EmbeddingBank& bank, const Vocabulary& vocab,
                    const std::string& path);

// Binary form: magic "BIMUBNK1", little-endian header, length-prefixed
// words, raw double arrays. Exact round trip.
void save_bank_binary(const EmbeddingBank& bank, const Vocabulary& vocab,
                      const std::string& path);

// Picks the binary form for paths ending in ".bin", text otherwise.
void save_bank(const EmbeddingBank& bank, const Vocabulary& vocab,
               const std::string& path);

struct LoadedBank {
  EmbeddingBank bank;
  Vocabulary vocab;  // counts are not stored in bank files and load as 0
};

// Sniffs text vs binary. Truncated or trailing content is an error, as is a
// header that disagrees with the body.
LoadedBank load_bank(const std::string& path);

// Conventional embedding text: first line `count dim`, then `word v1 .. vd`.
void save_embeddings_text(const Vocabulary& vocab, std::span<const double> table,
                          int dim, const std::string& path);

// Accepts the conventional text format or a single-sense bank (text or
// binary), taking the generic table as gamma2. Dimension mismatches and
// malformed lines (reported with their line number) raise DataError.
ForeignEmbeddings load_foreign(const std::string& path, int expected_dim);

// `word count` per line, id order.
void save_vocab(const Vocabulary& vocab, const std::string& path);
Vocabulary load_vocab(const std::string& path);

// Line-oriented key=value form.
void write_report(const TrainReport& report, const std::string& path);

}  // namespace bimu
