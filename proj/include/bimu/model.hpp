#pragma once

#include <span>
#include <vector>

#include "bimu/bank.hpp"
#include "bimu/types.hpp"

namespace bimu {

struct SensePosterior {
  std::vector<double> probs;
  int argmax() const;  // ties broken toward the lowest sense index
};

// Weighted mean of generic context embeddings feeding the encoder:
//   (1-lambda)/|C| * sum gamma[j]  +  lambda/|C2| * sum gamma2[k].
// A term whose context is empty or whose weight is exactly zero is skipped
// outright, so lambda = 0 is bit-for-bit identical to an absent second
// language. Contexts are summed in sorted order, making the result exactly
// invariant to permutation.
void combined_context(const EmbeddingBank& bank, std::span<const WordId> context,
                      std::span<const WordId> foreign, double lambda,
                      std::span<double> out);

// logits[s] = phi[pivot, s] . context_vec
void sense_logits(const EmbeddingBank& bank, WordId pivot,
                  std::span<const double> context_vec, std::span<double> out);

// Log-linear encoder: softmax over sense_logits(combined_context(...)).
// Both contexts empty (or weighted to nothing) gives the uniform posterior.
void encode_posterior(const EmbeddingBank& bank, WordId pivot,
                      std::span<const WordId> context,
                      std::span<const WordId> foreign, double lambda,
                      SensePosterior& out);
SensePosterior encode_posterior(const EmbeddingBank& bank, WordId pivot,
                                std::span<const WordId> context,
                                std::span<const WordId> foreign, double lambda);

// Negative-sampling score for predicting `target` from (pivot, sense):
//   log sigmoid(phi . gamma[target]) + sum_neg log sigmoid(-phi . gamma[neg])
// Higher is better; the trainer maximizes this value.
double decoder_loss(const EmbeddingBank& bank, WordId pivot, int sense,
                    WordId target, std::span<const WordId> negatives);

// Posterior-weighted decoder score: sum_s q_s * decoder_loss(s).
double marginal_loss(const EmbeddingBank& bank, WordId pivot,
                     std::span<const WordId> context,
                     std::span<const WordId> foreign, WordId target,
                     std::span<const WordId> negatives, double lambda);

// Analytic gradients of decoder_loss for one target, touching only
// phi[pivot, sense], gamma[target] and gamma of each negative. Returns the
// loss value.
double grads_hard(const EmbeddingBank& bank, WordId pivot, int sense,
                  WordId target, std::span<const WordId> negatives,
                  SparseGrads& out);

struct SoftGradOptions {
  double lambda = 0.0;
  double lambda_h = 0.0;
  // Follow the encoder path (softmax Jacobian plus the entropy term). When
  // false the posterior is treated as constant for the step and only the
  // decoder path receives gradients.
  bool backprop_encoder = true;
};

// Gradients of the per-instance soft objective
//   sum_t marginal_loss(target_t) + lambda_h * H(q)
// over all touched parameters. `negatives` is flat with negatives_per_target
// draws per target; gamma2 never receives gradients. Returns the objective.
double grads_soft(const EmbeddingBank& bank, WordId pivot,
                  std::span<const WordId> context,
                  std::span<const WordId> foreign,
                  std::span<const WordId> targets,
                  std::span<const WordId> negatives, int negatives_per_target,
                  const SoftGradOptions& options, SparseGrads& out);

}  // namespace bimu
