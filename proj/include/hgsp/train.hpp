#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "hgsp/diffusion.hpp"
#include "hgsp/henn.hpp"

namespace hgsp {

enum class PenaltyKind { hinge, barrier };
std::string to_string(PenaltyKind p);
PenaltyKind parse_penalty(std::string_view name);

struct TrainConfig {
  double lr = 0.0005;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double adam_eps = 1e-8;
  double decay_rate = 0.99;
  std::size_t decay_period = 20;
  double il_cap = 10.0;
  double il_penalty_weight = 1.0;
  PenaltyKind penalty = PenaltyKind::hinge;
  std::size_t epochs = 200;
  std::size_t batch_size = 32;
  std::size_t folds = 5;
  std::size_t shuffles = 5;
  std::uint64_t seed = 0;

  /// Throws `config` naming the offending field.
  void validate() const;
};

struct AdamState {
  std::vector<double> m;
  std::vector<double> v;
  std::size_t step = 0;  // updates applied so far
};

/// lr * decay_rate^floor(step / decay_period) for the 1-based step number.
double effective_lr(const TrainConfig& c, std::size_t step);

/// One bias-corrected Adam update. A non-finite gradient raises `numerical`
/// naming the parameter through `path`.
void adam_step(std::vector<double>& params, const std::vector<double>& grads, AdamState& state,
               const TrainConfig& c, const std::function<std::string(std::size_t)>& path = {});

/// Endpoint form of the integral-Lipschitz constant, max(|g(lo)|, |g(hi)|)
/// with g(l) = sum_k k h_k l^k. Differentiable away from |g(lo)| = |g(hi)|.
double endpoint_lipschitz(const GraphFilter& f, double lo, double hi);

struct PenaltyResult {
  double value = 0.0;
  double max_c = 0.0;          // largest endpoint constant over all filters
  std::vector<double> grads;   // flattened like the model parameters
};

/// weight * sum_filters max(0, C - cap)^2 (hinge) or -weight * sum log(cap - C)
/// (barrier, `numerical` error once some C >= cap). Each stage uses the
/// spectrum hull of its own operator.
PenaltyResult lipschitz_penalty(const HennModel& model, const HypergraphContext& ctx, const TrainConfig& c);

/// Mean softmax cross-entropy of the columns of `logits` and its gradient.
double cross_entropy(const Matrix& logits, const std::vector<int>& labels, Matrix* grad = nullptr);

struct LossResult {
  double loss = 0.0;
  double ce = 0.0;
  double penalty = 0.0;
  double max_c = 0.0;
  std::vector<double> grads;
};

LossResult loss(const HennModel& model, const HypergraphContext& ctx, const LabeledDataset& data,
                const std::vector<std::size_t>& batch, const TrainConfig& c);

/// Every filter normalized to |h| <= 1 on the spectrum of its stage operator.
void normalize_all(HennModel& model, const HypergraphContext& ctx);
void normalize_all(GnnModel& model, const ShiftOperator& s);

/// Largest grid integral-Lipschitz constant over all filters, per stage hull.
double max_filter_lipschitz(const HennModel& model, const HypergraphContext& ctx);

struct LogRow {
  std::size_t step = 0;
  double loss = 0.0;
  double ce = 0.0;
  double penalty = 0.0;
  double lr = 0.0;
  double max_c = 0.0;
};

/// Mini-batch Adam over `train` for c.epochs epochs, reshuffling each epoch
/// with `rng`; filters are normalized after each epoch.
std::vector<LogRow> train(HennModel& model, const HypergraphContext& ctx, const LabeledDataset& data,
                          const std::vector<std::size_t>& train, const TrainConfig& c, Rng& rng);

double accuracy(const HennModel& model, const HypergraphContext& ctx, const LabeledDataset& data,
                const std::vector<std::size_t>& indices);

/// Consecutive folds; the first (count mod k) folds get one extra element.
std::vector<std::vector<std::size_t>> fold_indices(const std::vector<std::size_t>& items, std::size_t k);

struct Score {
  double mean = 0.0;
  double sd = 0.0;
};
Score mean_sd(const std::vector<double>& xs);

/// Index of the highest mean + sd; the first wins ties. Empty input is an error.
std::size_t select_ucb(const std::vector<Score>& scores);

struct ShuffleResult {
  std::size_t selected = 0;
  std::vector<Score> candidate_scores;  // k-fold validation accuracy per candidate
  double validation = 0.0;              // CV mean of the selected candidate
  double test = 0.0;
  double max_c = 0.0;                   // grid constant of the final model
};

struct ArchitectureResult {
  std::string architecture;
  std::vector<ShuffleResult> shuffles;
  Score validation;
  Score test;
  double max_c = 0.0;
  HennModel final_model;       // from the last shuffle
  std::vector<LogRow> final_log;  // training log of final_model
};

/// For each shuffle: permute the training split, run k-fold CV for every
/// candidate, select by the upper confidence bound, retrain the winner on the
/// whole training split and score it on the test split.
ArchitectureResult cross_validate(const LabeledDataset& data, const Hypergraph& h,
                                  const std::vector<ArchitectureSpec>& model_space, const TrainConfig& c);

}  // namespace hgsp
