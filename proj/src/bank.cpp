#include "bimu/bank.hpp"

#include <cmath>
#include <random>

namespace bimu {

EmbeddingBank init_bank(std::int64_t vocab_size, int senses, int dim,
                        std::uint64_t seed) {
  EmbeddingBank bank;
  bank.vocab_size = vocab_size;
  bank.senses = senses;
  bank.dim = dim;
  bank.phi.resize(static_cast<std::size_t>(vocab_size) * senses * dim);
  bank.gamma.resize(static_cast<std::size_t>(vocab_size) * dim);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uniform(-0.05, 0.05);
  for (double& v : bank.phi) v = uniform(rng);
  for (double& v : bank.gamma) v = uniform(rng);
  return bank;
}

std::span<double> SparseGrads::grad_for(std::vector<Entry>& entries,
                                        std::size_t& used, std::int64_t row,
                                        int dim) {
  for (std::size_t i = 0; i < used; ++i) {
    if (entries[i].row == row) return entries[i].grad;
  }
  if (used == entries.size()) entries.emplace_back();
  Entry& entry = entries[used++];
  entry.row = row;
  entry.grad.assign(static_cast<std::size_t>(dim), 0.0);
  return entry.grad;
}

void adagrad_apply(AdaGradState& state, const SparseGrads& grads,
                   EmbeddingBank& bank) {
  const auto dim = static_cast<std::size_t>(bank.dim);
  for (const SparseGrads::Entry& entry : grads.phi_entries()) {
    double* accum = state.accum_phi.data() + static_cast<std::size_t>(entry.row) * dim;
    double* param = bank.phi.data() + static_cast<std::size_t>(entry.row) * dim;
    for (std::size_t i = 0; i < dim; ++i) {
      const double g = entry.grad[i];
      accum[i] += g * g;
      param[i] += state.initial_lr * g / (kAdaGradEpsilon + std::sqrt(accum[i]));
    }
  }
  for (const SparseGrads::Entry& entry : grads.gamma_entries()) {
    double* accum = state.accum_gamma.data() + static_cast<std::size_t>(entry.row) * dim;
    double* param = bank.gamma.data() + static_cast<std::size_t>(entry.row) * dim;
    for (std::size_t i = 0; i < dim; ++i) {
      const double g = entry.grad[i];
      accum[i] += g * g;
      param[i] += state.initial_lr * g / (kAdaGradEpsilon + std::sqrt(accum[i]));
    }
  }
}

}  // namespace bimu
