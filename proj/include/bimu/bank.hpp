#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "bimu/types.hpp"

namespace bimu {

// All model parameters. phi holds S sense-specific vectors per word, gamma
// one generic vector per word (shared between the encoder context side and
// the decoder output side), gamma2 the frozen second-language table. All
// three share the dimensionality d; training never writes gamma2.
struct EmbeddingBank {
  std::int64_t vocab_size = 0;
  int senses = 0;
  int dim = 0;
  std::int64_t foreign_vocab_size = 0;
  std::vector<double> phi;     // [word * senses + sense] * dim
  std::vector<double> gamma;   // [word] * dim
  std::vector<double> gamma2;  // [foreign word] * dim

  std::span<double> phi_row(WordId word, int sense) {
    return {phi.data() + (static_cast<std::size_t>(word) * senses + sense) * dim,
            static_cast<std::size_t>(dim)};
  }
  std::span<const double> phi_row(WordId word, int sense) const {
    return {phi.data() + (static_cast<std::size_t>(word) * senses + sense) * dim,
            static_cast<std::size_t>(dim)};
  }
  std::span<double> gamma_row(WordId word) {
    return {gamma.data() + static_cast<std::size_t>(word) * dim,
            static_cast<std::size_t>(dim)};
  }
  std::span<const double> gamma_row(WordId word) const {
    return {gamma.data() + static_cast<std::size_t>(word) * dim,
            static_cast<std::size_t>(dim)};
  }
  std::span<const double> gamma2_row(WordId word) const {
    return {gamma2.data() + static_cast<std::size_t>(word) * dim,
            static_cast<std::size_t>(dim)};
  }
};

// phi and gamma filled i.i.d. uniform on [-0.05, 0.05] from the seeded
// generator (phi first, then gamma); gamma2 stays empty until installed.
EmbeddingBank init_bank(std::int64_t vocab_size, int senses, int dim,
                        std::uint64_t seed);

// Sparse per-call gradient set: a handful of touched phi/gamma rows with a
// dense d-vector each. Duplicate rows accumulate into one entry. Buffers are
// reused across clear() calls.
class SparseGrads {
 public:
  struct Entry {
    std::int64_t row = 0;
    std::vector<double> grad;
  };

  void clear() { phi_used_ = gamma_used_ = 0; }
  // Find-or-create the (zeroed) accumulator for a row.
  std::span<double> phi_grad(std::int64_t row, int dim) {
    return grad_for(phi_, phi_used_, row, dim);
  }
  std::span<double> gamma_grad(std::int64_t row, int dim) {
    return grad_for(gamma_, gamma_used_, row, dim);
  }

  std::span<const Entry> phi_entries() const { return {phi_.data(), phi_used_}; }
  std::span<const Entry> gamma_entries() const { return {gamma_.data(), gamma_used_}; }

 private:
  static std::span<double> grad_for(std::vector<Entry>& entries, std::size_t& used,
                                    std::int64_t row, int dim);
  std::vector<Entry> phi_, gamma_;
  std::size_t phi_used_ = 0, gamma_used_ = 0;
};

// Per-coordinate squared-gradient accumulators for phi and gamma. gamma2 is
// frozen and has none.
struct AdaGradState {
  AdaGradState(std::int64_t vocab_size, int senses, int dim, double initial_lr)
      : accum_phi(static_cast<std::size_t>(vocab_size) * senses * dim, 0.0),
        accum_gamma(static_cast<std::size_t>(vocab_size) * dim, 0.0),
        initial_lr(initial_lr) {}
  std::vector<double> accum_phi;
  std::vector<double> accum_gamma;
  double initial_lr = 0.1;
};

inline constexpr double kAdaGradEpsilon = 1e-8;

// Ascent step for a maximized objective:
//   accum += g^2;  theta += lr * g / (eps + sqrt(accum))
void adagrad_apply(AdaGradState& state, const SparseGrads& grads,
                   EmbeddingBank& bank);

}  // namespace bimu
