#include "bimu/io.hpp"

#include <cinttypes>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <memory>
#include <sstream>
#include <vector>

#include "bimu/corpus.hpp"

namespace bimu {

namespace {

constexpr char kBinaryMagic[8] = {'B', 'I', 'M', 'U', 'B', 'N', 'K', '1'};
constexpr std::uint32_t kFormatVersion = 1;

void write_double_row(std::FILE* out, std::span<const double> row) {
  for (double v : row) std::fprintf(out, " %.17g", v);
  std::fputc('\n', out);
}

struct LineReader {
  std::ifstream in;
  std::string path;
  std::size_t line_no = 0;
  explicit LineReader(const std::string& p) : in(p), path(p) {
    if (!in) throw DataError("cannot open file: " + p);
  }
  bool next(std::string& line) {
    if (!std::getline(in, line)) return false;
    ++line_no;
    return true;
  }
  [[noreturn]] void fail(const std::string& what) const {
    throw DataError(path + ":" + std::to_string(line_no) + ": " + what);
  }
};

double parse_double(const std::string& field, const LineReader& reader) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(field, &pos);
    if (pos != field.size()) throw std::invalid_argument(field);
    return v;
  } catch (const std::exception&) {
    reader.fail("malformed float '" + field + "'");
  }
}

template <typename T>
void write_raw(std::FILE* out, const T& value) {
  std::fwrite(&value, sizeof(T), 1, out);
}

template <typename T>
T read_raw(std::FILE* in, const std::string& path) {
  T value{};
  if (std::fread(&value, sizeof(T), 1, in) != 1) {
    throw DataError("truncated bank file: " + path);
  }
  return value;
}

struct FileCloser {
  void operator()(std::FILE* f) const noexcept {
    if (f != nullptr) std::fclose(f);
  }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

FilePtr open_file(const std::string& path, const char* mode) {
  FilePtr f(std::fopen(path.c_str(), mode));
  if (!f) throw DataError("cannot open file: " + path);
  return f;
}

bool sniff_binary(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open file: " + path);
  char head[8] = {};
  in.read(head, sizeof(head));
  return in.gcount() == 8 && std::memcmp(head, kBinaryMagic, 8) == 0;
}

LoadedBank load_bank_text(const std::string& path) {
  LineReader reader(path);
  std::string line;
  if (!reader.next(line)) throw DataError("empty bank file: " + path);
  std::istringstream header(line);
  BankFileHeader h;
  if (!(header >> h.vocab_size >> h.num_senses >> h.dim)) {
    reader.fail("expected header '|V| S d'");
  }
  if (header >> h.format_version) {
    if (h.format_version != 1) reader.fail("unsupported format version");
  }
  std::string trailing;
  if (header >> trailing) reader.fail("unexpected trailing header field");
  if (h.vocab_size < 1 || h.num_senses < 1 || h.dim < 1) {
    reader.fail("header fields must be positive");
  }

  LoadedBank loaded;
  EmbeddingBank& bank = loaded.bank;
  bank.vocab_size = h.vocab_size;
  bank.senses = h.num_senses;
  bank.dim = h.dim;
  bank.phi.resize(static_cast<std::size_t>(h.vocab_size) * h.num_senses * h.dim);
  bank.gamma.resize(static_cast<std::size_t>(h.vocab_size) * h.dim);
  std::vector<std::string> words(static_cast<std::size_t>(h.vocab_size));

  for (std::int64_t w = 0; w < h.vocab_size; ++w) {
    for (int s = 0; s < h.num_senses; ++s) {
      if (!reader.next(line)) reader.fail("missing sense row");
      std::istringstream row(line);
      std::string word, field;
      int sense = -1;
      if (!(row >> word >> sense)) reader.fail("expected 'word sense v1 .. vd'");
      if (sense != s) reader.fail("sense rows out of order");
      if (s == 0) {
        words[static_cast<std::size_t>(w)] = word;
      } else if (word != words[static_cast<std::size_t>(w)]) {
        reader.fail("sense rows of one word must be adjacent");
      }
      auto dest = bank.phi_row(static_cast<WordId>(w), s);
      for (int i = 0; i < h.dim; ++i) {
        if (!(row >> field)) reader.fail("sense row shorter than dim");
        dest[i] = parse_double(field, reader);
      }
      if (row >> field) reader.fail("sense row longer than dim");
    }
  }
  if (!reader.next(line) || line != "#gamma") {
    reader.fail("expected '#gamma' section");
  }
  for (std::int64_t w = 0; w < h.vocab_size; ++w) {
    if (!reader.next(line)) reader.fail("missing generic row");
    std::istringstream row(line);
    std::string word, field;
    if (!(row >> word)) reader.fail("expected 'word v1 .. vd'");
    if (word != words[static_cast<std::size_t>(w)]) {
      reader.fail("generic rows must follow vocabulary order");
    }
    auto dest = bank.gamma_row(static_cast<WordId>(w));
    for (int i = 0; i < h.dim; ++i) {
      if (!(row >> field)) reader.fail("generic row shorter than dim");
      dest[i] = parse_double(field, reader);
    }
    if (row >> field) reader.fail("generic row longer than dim");
  }
  if (reader.next(line)) reader.fail("trailing content after bank body");

  // Counts are not stored in bank files; the id order still encodes the
  // training-frequency ranking.
  loaded.vocab = Vocabulary(std::move(words),
                            std::vector<std::int64_t>(
                                static_cast<std::size_t>(h.vocab_size), 0));
  return loaded;
}

LoadedBank load_bank_binary(const std::string& path) {
  FilePtr f = open_file(path, "rb");
  char magic[8] = {};
  if (std::fread(magic, 1, 8, f.get()) != 8 ||
      std::memcmp(magic, kBinaryMagic, 8) != 0) {
    throw DataError("not a binary bank file: " + path);
  }
  const auto version = read_raw<std::uint32_t>(f.get(), path);
  if (version != kFormatVersion) {
    throw DataError("unsupported bank format version in " + path);
  }
  const auto senses = read_raw<std::uint32_t>(f.get(), path);
  const auto dim = read_raw<std::uint32_t>(f.get(), path);
  const auto vocab_size = read_raw<std::uint64_t>(f.get(), path);
  if (senses < 1 || dim < 1 || vocab_size < 1) {
    throw DataError("corrupt bank header in " + path);
  }

  LoadedBank loaded;
  EmbeddingBank& bank = loaded.bank;
  bank.vocab_size = static_cast<std::int64_t>(vocab_size);
  bank.senses = static_cast<int>(senses);
  bank.dim = static_cast<int>(dim);
  std::vector<std::string> words(vocab_size);
  for (auto& word : words) {
    const auto len = read_raw<std::uint32_t>(f.get(), path);
    word.resize(len);
    if (len > 0 && std::fread(word.data(), 1, len, f.get()) != len) {
      throw DataError("truncated bank file: " + path);
    }
  }
  bank.phi.resize(vocab_size * senses * dim);
  bank.gamma.resize(vocab_size * dim);
  if (std::fread(bank.phi.data(), sizeof(double), bank.phi.size(), f.get()) !=
      bank.phi.size()) {
    throw DataError("truncated bank file: " + path);
  }
  if (std::fread(bank.gamma.data(), sizeof(double), bank.gamma.size(), f.get()) !=
      bank.gamma.size()) {
    throw DataError("truncated bank file: " + path);
  }
  char extra = 0;
  if (std::fread(&extra, 1, 1, f.get()) == 1) {
    throw DataError("trailing content after bank body: " + path);
  }
  loaded.vocab = Vocabulary(std::move(words),
                            std::vector<std::int64_t>(vocab_size, 0));
  return loaded;
}

}  // namespace

void save_bank_text(const EmbeddingBank& bank, const Vocabulary& vocab,
                    const std::string& path) {
  if (static_cast<std::int64_t>(vocab.size()) != bank.vocab_size) {
    throw DataError("bank and vocabulary sizes disagree");
  }
  FilePtr f = open_file(path, "w");
  std::fprintf(f.get(), "%" PRId64 " %d %d\n", bank.vocab_size, bank.senses,
               bank.dim);
  for (std::int64_t w = 0; w < bank.vocab_size; ++w) {
    for (int s = 0; s < bank.senses; ++s) {
      std::fprintf(f.get(), "%s %d", vocab.word(static_cast<WordId>(w)).c_str(), s);
      write_double_row(f.get(), bank.phi_row(static_cast<WordId>(w), s));
    }
  }
  std::fprintf(f.get(), "#gamma\n");
  for (std::int64_t w = 0; w < bank.vocab_size; ++w) {
    std::fprintf(f.get(), "%s", vocab.word(static_cast<WordId>(w)).c_str());
    write_double_row(f.get(), bank.gamma_row(static_cast<WordId>(w)));
  }
}

void save_bank_binary(const EmbeddingBank& bank, const Vocabulary& vocab,
                      const std::string& path) {
  if (static_cast<std::int64_t>(vocab.size()) != bank.vocab_size) {
    throw DataError("bank and vocabulary sizes disagree");
  }
  FilePtr f = open_file(path, "wb");
  std::fwrite(kBinaryMagic, 1, 8, f.get());
  write_raw(f.get(), kFormatVersion);
  write_raw(f.get(), static_cast<std::uint32_t>(bank.senses));
  write_raw(f.get(), static_cast<std::uint32_t>(bank.dim));
  write_raw(f.get(), static_cast<std::uint64_t>(bank.vocab_size));
  for (std::int64_t w = 0; w < bank.vocab_size; ++w) {
    const std::string& word = vocab.word(static_cast<WordId>(w));
    write_raw(f.get(), static_cast<std::uint32_t>(word.size()));
    std::fwrite(word.data(), 1, word.size(), f.get());
  }
  std::fwrite(bank.phi.data(), sizeof(double), bank.phi.size(), f.get());
  std::fwrite(bank.gamma.data(), sizeof(double), bank.gamma.size(), f.get());
}

void save_bank(const EmbeddingBank& bank, const Vocabulary& vocab,
               const std::string& path) {
  if (path.ends_with(".bin")) {
    save_bank_binary(bank, vocab, path);
  } else {
    save_bank_text(bank, vocab, path);
  }
}

LoadedBank load_bank(const std::string& path) {
  return sniff_binary(path) ? load_bank_binary(path) : load_bank_text(path);
}

void save_embeddings_text(const Vocabulary& vocab, std::span<const double> table,
                          int dim, const std::string& path) {
  if (table.size() != vocab.size() * static_cast<std::size_t>(dim)) {
    throw DataError("embedding table size does not match vocabulary");
  }
  FilePtr f = open_file(path, "w");
  std::fprintf(f.get(), "%zu %d\n", vocab.size(), dim);
  for (std::size_t w = 0; w < vocab.size(); ++w) {
    std::fprintf(f.get(), "%s", vocab.word(static_cast<WordId>(w)).c_str());
    write_double_row(f.get(), table.subspan(w * static_cast<std::size_t>(dim),
                                            static_cast<std::size_t>(dim)));
  }
}

ForeignEmbeddings load_foreign(const std::string& path, int expected_dim) {
  ForeignEmbeddings foreign;
  if (sniff_binary(path)) {
    LoadedBank loaded = load_bank_binary(path);
    if (loaded.bank.senses != 1) {
      throw DataError("foreign embeddings must be single-sense, found S=" +
                      std::to_string(loaded.bank.senses) + " in " + path);
    }
    if (loaded.bank.dim != expected_dim) {
      throw DataError("foreign embedding dimension mismatch: expected " +
                      std::to_string(expected_dim) + ", found " +
                      std::to_string(loaded.bank.dim) + " in " + path);
    }
    foreign.vocab = std::move(loaded.vocab);
    foreign.dim = loaded.bank.dim;
    foreign.table = std::move(loaded.bank.gamma);
    return foreign;
  }

  LineReader reader(path);
  std::string line;
  if (!reader.next(line)) throw DataError("empty embedding file: " + path);
  std::istringstream header(line);
  std::vector<std::int64_t> header_ints;
  std::int64_t value = 0;
  while (header >> value) header_ints.push_back(value);
  if (header_ints.size() == 3 || header_ints.size() == 4) {
    // Single-sense bank in text form.
    LoadedBank loaded = load_bank_text(path);
    if (loaded.bank.senses != 1) {
      throw DataError("foreign embeddings must be single-sense, found S=" +
                      std::to_string(loaded.bank.senses) + " in " + path);
    }
    if (loaded.bank.dim != expected_dim) {
      throw DataError("foreign embedding dimension mismatch: expected " +
                      std::to_string(expected_dim) + ", found " +
                      std::to_string(loaded.bank.dim) + " in " + path);
    }
    foreign.vocab = std::move(loaded.vocab);
    foreign.dim = loaded.bank.dim;
    foreign.table = std::move(loaded.bank.gamma);
    return foreign;
  }
  if (header_ints.size() != 2) {
    reader.fail("expected 'count dim' header");
  }
  const std::int64_t count = header_ints[0];
  const auto dim = static_cast<int>(header_ints[1]);
  if (count < 1 || dim < 1) reader.fail("header fields must be positive");
  if (dim != expected_dim) {
    throw DataError("foreign embedding dimension mismatch: expected " +
                    std::to_string(expected_dim) + ", found " +
                    std::to_string(dim) + " in " + path);
  }
  std::vector<std::string> words;
  words.reserve(static_cast<std::size_t>(count));
  foreign.dim = dim;
  foreign.table.resize(static_cast<std::size_t>(count) * dim);
  for (std::int64_t w = 0; w < count; ++w) {
    if (!reader.next(line)) reader.fail("missing embedding row");
    std::istringstream row(line);
    std::string word, field;
    if (!(row >> word)) reader.fail("expected 'word v1 .. vd'");
    words.push_back(word);
    for (int i = 0; i < dim; ++i) {
      if (!(row >> field)) reader.fail("row shorter than dim");
      foreign.table[static_cast<std::size_t>(w) * dim + i] =
          parse_double(field, reader);
    }
    if (row >> field) reader.fail("row longer than dim");
  }
  if (reader.next(line)) reader.fail("trailing content after embedding rows");
  foreign.vocab = Vocabulary(std::move(words),
                             std::vector<std::int64_t>(
                                 static_cast<std::size_t>(count), 0));
  return foreign;
}

void save_vocab(const Vocabulary& vocab, const std::string& path) {
  FilePtr f = open_file(path, "w");
  for (std::size_t w = 0; w < vocab.size(); ++w) {
    std::fprintf(f.get(), "%s %" PRId64 "\n",
                 vocab.word(static_cast<WordId>(w)).c_str(),
                 vocab.count(static_cast<WordId>(w)));
  }
}

Vocabulary load_vocab(const std::string& path) {
  LineReader reader(path);
  std::string line;
  std::vector<std::string> words;
  std::vector<std::int64_t> counts;
  while (reader.next(line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string word;
    std::int64_t count = 0;
    if (!(row >> word >> count)) reader.fail("expected 'word count'");
    words.push_back(word);
    counts.push_back(count);
  }
  if (words.empty()) throw DataError("empty vocabulary file: " + path);
  return Vocabulary(std::move(words), std::move(counts));
}

void write_report(const TrainReport& report, const std::string& path) {
  FilePtr f = open_file(path, "w");
  const TrainConfig& c = report.config;
  std::fprintf(f.get(), "mode=%s\n", to_string(report.mode).c_str());
  std::fprintf(f.get(), "updates=%s\n", report.hard_updates ? "hard" : "soft");
  std::fprintf(f.get(), "senses=%d\ndim=%d\n", c.senses, c.dim);
  std::fprintf(f.get(), "window_n=%d\n", c.window_n);
  if (c.window_m == kInfiniteWindow) {
    std::fprintf(f.get(), "window_m=inf\n");
  } else {
    std::fprintf(f.get(), "window_m=%d\n", c.window_m);
  }
  std::fprintf(f.get(), "lambda=%.17g\nlambda_h=%.17g\n", c.lambda, c.lambda_h);
  std::fprintf(f.get(), "negatives=%d\nlr=%.17g\nbatch=%d\n", c.negatives, c.lr,
               c.batch_size);
  std::fprintf(f.get(), "min_count=%" PRId64 "\nsample=%.17g\n", c.min_count,
               c.sample_factor);
  std::fprintf(f.get(), "epochs=%d\nseed=%llu\nthreads=%d\n", c.epochs,
               static_cast<unsigned long long>(c.seed), c.threads);
  std::fprintf(f.get(), "instances=%llu\n",
               static_cast<unsigned long long>(report.instances));
  std::fprintf(f.get(), "wall_seconds=%.3f\n", report.wall_seconds);
  for (std::size_t e = 0; e < report.epoch_objective.size(); ++e) {
    std::fprintf(f.get(), "epoch%zu_objective=%.17g\n", e + 1,
                 report.epoch_objective[e]);
    std::fprintf(f.get(), "epoch%zu_instances=%llu\n", e + 1,
                 static_cast<unsigned long long>(report.epoch_instances[e]));
    std::fprintf(f.get(), "epoch%zu_predictions=%llu\n", e + 1,
                 static_cast<unsigned long long>(report.epoch_predictions[e]));
  }
}

}  // namespace bimu
