#include "bimu/model.hpp"

#include <algorithm>
#include <cmath>

#include "bimu/math.hpp"

namespace bimu {

namespace {

thread_local std::vector<WordId> tl_sorted;
thread_local std::vector<double> tl_context;
thread_local std::vector<double> tl_scores;

// Adds weight/|ids| * sum of rows to `out`, accumulating in sorted id order
// so the result does not depend on the order the context arrived in.
void add_context_mean(std::span<const double> table, int dim,
                      std::span<const WordId> ids, double weight,
                      std::span<double> out) {
  tl_sorted.assign(ids.begin(), ids.end());
  std::sort(tl_sorted.begin(), tl_sorted.end());
  const double scale = weight / static_cast<double>(ids.size());
  for (WordId w : tl_sorted) {
    const double* row = table.data() + static_cast<std::size_t>(w) * dim;
    for (int i = 0; i < dim; ++i) out[i] += scale * row[i];
  }
}

}  // namespace

int SensePosterior::argmax() const {
  return static_cast<int>(
      std::max_element(probs.begin(), probs.end()) - probs.begin());
}

void combined_context(const EmbeddingBank& bank, std::span<const WordId> context,
                      std::span<const WordId> foreign, double lambda,
                      std::span<double> out) {
  std::fill(out.begin(), out.end(), 0.0);
  if (!context.empty() && lambda < 1.0) {
    add_context_mean(bank.gamma, bank.dim, context, 1.0 - lambda, out);
  }
  if (!foreign.empty() && lambda > 0.0) {
    add_context_mean(bank.gamma2, bank.dim, foreign, lambda, out);
  }
}

void sense_logits(const EmbeddingBank& bank, WordId pivot,
                  std::span<const double> context_vec, std::span<double> out) {
  for (int s = 0; s < bank.senses; ++s) {
    out[s] = dot(bank.phi_row(pivot, s), context_vec);
  }
}

void encode_posterior(const EmbeddingBank& bank, WordId pivot,
                      std::span<const WordId> context,
                      std::span<const WordId> foreign, double lambda,
                      SensePosterior& out) {
  tl_context.assign(static_cast<std::size_t>(bank.dim), 0.0);
  combined_context(bank, context, foreign, lambda, tl_context);
  out.probs.resize(static_cast<std::size_t>(bank.senses));
  sense_logits(bank, pivot, tl_context, out.probs);
  softmax_inplace(out.probs);
}

SensePosterior encode_posterior(const EmbeddingBank& bank, WordId pivot,
                                std::span<const WordId> context,
                                std::span<const WordId> foreign, double lambda) {
  SensePosterior posterior;
  encode_posterior(bank, pivot, context, foreign, lambda, posterior);
  return posterior;
}

double decoder_loss(const EmbeddingBank& bank, WordId pivot, int sense,
                    WordId target, std::span<const WordId> negatives) {
  const auto phi = bank.phi_row(pivot, sense);
  double loss = log_sigmoid(dot(phi, bank.gamma_row(target)));
  for (WordId neg : negatives) {
    loss += log_sigmoid(-dot(phi, bank.gamma_row(neg)));
  }
  return loss;
}

double marginal_loss(const EmbeddingBank& bank, WordId pivot,
                     std::span<const WordId> context,
                     std::span<const WordId> foreign, WordId target,
                     std::span<const WordId> negatives, double lambda) {
  const SensePosterior q = encode_posterior(bank, pivot, context, foreign, lambda);
  double loss = 0.0;
  for (int s = 0; s < bank.senses; ++s) {
    loss += q.probs[s] * decoder_loss(bank, pivot, s, target, negatives);
  }
  return loss;
}

double grads_hard(const EmbeddingBank& bank, WordId pivot, int sense,
                  WordId target, std::span<const WordId> negatives,
                  SparseGrads& out) {
  const auto phi = bank.phi_row(pivot, sense);
  const std::int64_t phi_row = static_cast<std::int64_t>(pivot) * bank.senses + sense;
  auto phi_grad = out.phi_grad(phi_row, bank.dim);

  const auto gamma_t = bank.gamma_row(target);
  const double score_t = dot(phi, gamma_t);
  double loss = log_sigmoid(score_t);
  // d/dx log sigmoid(x) = sigmoid(-x)
  const double coeff_t = sigmoid(-score_t);
  auto target_grad = out.gamma_grad(target, bank.dim);
  for (int i = 0; i < bank.dim; ++i) {
    phi_grad[i] += coeff_t * gamma_t[i];
    target_grad[i] += coeff_t * phi[i];
  }
  for (WordId neg : negatives) {
    const auto gamma_n = bank.gamma_row(neg);
    const double score_n = dot(phi, gamma_n);
    loss += log_sigmoid(-score_n);
    const double coeff_n = -sigmoid(score_n);
    auto neg_grad = out.gamma_grad(neg, bank.dim);
    for (int i = 0; i < bank.dim; ++i) {
      phi_grad[i] += coeff_n * gamma_n[i];
      neg_grad[i] += coeff_n * phi[i];
    }
  }
  return loss;
}

double grads_soft(const EmbeddingBank& bank, WordId pivot,
                  std::span<const WordId> context,
                  std::span<const WordId> foreign,
                  std::span<const WordId> targets,
                  std::span<const WordId> negatives, int negatives_per_target,
                  const SoftGradOptions& options, SparseGrads& out) {
  const int senses = bank.senses;
  const int dim = bank.dim;
  const SensePosterior q =
      encode_posterior(bank, pivot, context, foreign, options.lambda);

  // Decoder path: per sense s, accumulate q_s-weighted gradients and the
  // per-sense score sum A_s = sum_t decoder_loss(s, t).
  tl_scores.assign(static_cast<std::size_t>(senses), 0.0);
  double objective = 0.0;
  for (int s = 0; s < senses; ++s) {
    const auto phi = bank.phi_row(pivot, s);
    auto phi_grad =
        out.phi_grad(static_cast<std::int64_t>(pivot) * senses + s, dim);
    double score_sum = 0.0;
    for (std::size_t t = 0; t < targets.size(); ++t) {
      const WordId target = targets[t];
      const auto gamma_t = bank.gamma_row(target);
      const double score_t = dot(phi, gamma_t);
      score_sum += log_sigmoid(score_t);
      const double coeff_t = q.probs[s] * sigmoid(-score_t);
      auto target_grad = out.gamma_grad(target, dim);
      for (int i = 0; i < dim; ++i) {
        phi_grad[i] += coeff_t * gamma_t[i];
        target_grad[i] += coeff_t * phi[i];
      }
      const auto negs = negatives.subspan(t * negatives_per_target,
                                          negatives_per_target);
      for (WordId neg : negs) {
        const auto gamma_n = bank.gamma_row(neg);
        const double score_n = dot(phi, gamma_n);
        score_sum += log_sigmoid(-score_n);
        const double coeff_n = -q.probs[s] * sigmoid(score_n);
        auto neg_grad = out.gamma_grad(neg, dim);
        for (int i = 0; i < dim; ++i) {
          phi_grad[i] += coeff_n * gamma_n[i];
          neg_grad[i] += coeff_n * phi[i];
        }
      }
    }
    tl_scores[s] = score_sum;
    objective += q.probs[s] * score_sum;
  }
  const double h = entropy(q.probs);
  objective += options.lambda_h * h;

  if (!options.backprop_encoder) return objective;

  // Encoder path through the softmax Jacobian. Per-logit coefficient:
  //   dJ/dz_u = q_u * (A_u - sum_s q_s A_s) - lambda_h * q_u * (log q_u + H)
  const double mean_score = dot(q.probs, tl_scores);
  tl_context.assign(static_cast<std::size_t>(dim), 0.0);
  combined_context(bank, context, foreign, options.lambda, tl_context);
  std::vector<double> logit_grad(static_cast<std::size_t>(senses), 0.0);
  for (int s = 0; s < senses; ++s) {
    double g = q.probs[s] * (tl_scores[s] - mean_score);
    if (options.lambda_h != 0.0 && q.probs[s] > 0.0) {
      g -= options.lambda_h * q.probs[s] * (std::log(q.probs[s]) + h);
    }
    logit_grad[s] = g;
    auto phi_grad =
        out.phi_grad(static_cast<std::int64_t>(pivot) * senses + s, dim);
    for (int i = 0; i < dim; ++i) phi_grad[i] += g * tl_context[i];
  }
  // Context words enter each logit via phi_s . c with weight (1-lambda)/|C|
  // per occurrence; gamma2 is frozen so the foreign side gets nothing.
  if (!context.empty() && options.lambda < 1.0) {
    const double scale =
        (1.0 - options.lambda) / static_cast<double>(context.size());
    std::vector<double> dctx(static_cast<std::size_t>(dim), 0.0);
    for (int s = 0; s < senses; ++s) {
      const auto phi = bank.phi_row(pivot, s);
      for (int i = 0; i < dim; ++i) dctx[i] += logit_grad[s] * phi[i];
    }
    tl_sorted.assign(context.begin(), context.end());
    std::sort(tl_sorted.begin(), tl_sorted.end());
    for (WordId w : tl_sorted) {
      auto ctx_grad = out.gamma_grad(w, dim);
      for (int i = 0; i < dim; ++i) ctx_grad[i] += scale * dctx[i];
    }
  }
  return objective;
}

}  // namespace bimu
