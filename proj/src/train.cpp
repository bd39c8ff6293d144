#include "hgsp/train.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace hgsp {

std::string to_string(PenaltyKind p) { return p == PenaltyKind::hinge ? "hinge" : "barrier"; }

PenaltyKind parse_penalty(std::string_view name) {
  if (name == "hinge") return PenaltyKind::hinge;
  if (name == "barrier") return PenaltyKind::barrier;
  fail(ErrorKind::config, "unknown penalty '" + std::string(name) + "' (expected hinge or barrier)");
}

void TrainConfig::validate() const {
  auto need = [](bool ok, const char* field, const char* what) {
    if (!ok) fail(ErrorKind::config, std::string(field) + ": " + what);
  };
  need(lr > 0.0 && std::isfinite(lr), "lr", "must be positive");
  need(beta1 > 0.0 && beta1 < 1.0, "adam_betas[0]", "must lie in (0, 1)");
  need(beta2 > 0.0 && beta2 < 1.0, "adam_betas[1]", "must lie in (0, 1)");
  need(adam_eps > 0.0, "adam_eps", "must be positive");
  need(decay_rate > 0.0 && decay_rate <= 1.0, "decay_rate", "must lie in (0, 1]");
  need(decay_period > 0, "decay_period", "must be positive");
  need(il_cap > 0.0, "il_cap", "must be positive");
  need(il_penalty_weight >= 0.0, "il_penalty_weight", "must be nonnegative");
  need(epochs > 0, "epochs", "must be positive");
  need(batch_size > 0, "batch_size", "must be positive");
  need(folds >= 2, "folds", "must be at least 2");
  need(shuffles > 0, "shuffles", "must be positive");
}

double effective_lr(const TrainConfig& c, std::size_t step) {
  return c.lr * std::pow(c.decay_rate, static_cast<double>(step / c.decay_period));
}

void adam_step(std::vector<double>& params, const std::vector<double>& grads, AdamState& state, const TrainConfig& c,
               const std::function<std::string(std::size_t)>& path) {
  if (grads.size() != params.size()) fail(ErrorKind::invalid_argument, "adam_step: gradient size mismatch");
  for (std::size_t i = 0; i < grads.size(); ++i)
    if (!std::isfinite(grads[i]))
      fail(ErrorKind::numerical, "non-finite gradient at " + (path ? path(i) : "parameter " + std::to_string(i)));
  if (state.m.size() != params.size()) {
    state.m.assign(params.size(), 0.0);
    state.v.assign(params.size(), 0.0);
    state.step = 0;
  }
  ++state.step;
  const double lr = effective_lr(c, state.step);
  const double b1t = 1.0 - std::pow(c.beta1, static_cast<double>(state.step));
  const double b2t = 1.0 - std::pow(c.beta2, static_cast<double>(state.step));
  for (std::size_t i = 0; i < params.size(); ++i) {
    state.m[i] = c.beta1 * state.m[i] + (1.0 - c.beta1) * grads[i];
    state.v[i] = c.beta2 * state.v[i] + (1.0 - c.beta2) * grads[i] * grads[i];
    params[i] -= lr * (state.m[i] / b1t) / (std::sqrt(state.v[i] / b2t) + c.adam_eps);
  }
}

double endpoint_lipschitz(const GraphFilter& f, double lo, double hi) {
  return std::max(std::abs(lambda_derivative(f, lo)), std::abs(lambda_derivative(f, hi)));
}

PenaltyResult lipschitz_penalty(const HennModel& model, const HypergraphContext& ctx, const TrainConfig& c) {
  PenaltyResult r;
  r.grads.assign(model.parameter_count(), 0.0);
  std::size_t offset = 0;
  for (const auto& stage : model.stages) {
    const Spectrum& sp = ctx.operator_for(stage.kind).spectrum();
    const double lo = sp.lambda_min(), hi = sp.lambda_max();
    for (const auto& layer : stage.model.layers) {
      const auto rows = static_cast<std::size_t>(layer.in());
      const std::size_t block = rows * layer.out();
      for (std::size_t i = 0; i < layer.out(); ++i)
        for (std::size_t j = 0; j < rows; ++j) {
          const GraphFilter f = layer.filter(i, j);
          const double a = lambda_derivative(f, lo), b = lambda_derivative(f, hi);
          const bool at_lo = std::abs(a) >= std::abs(b);
          const double cval = at_lo ? std::abs(a) : std::abs(b);
          const double lam = at_lo ? lo : hi;
          const double sign = (at_lo ? a : b) >= 0.0 ? 1.0 : -1.0;
          r.max_c = std::max(r.max_c, cval);
          double outer = 0.0;
          if (c.penalty == PenaltyKind::hinge) {
            if (cval > c.il_cap) {
              r.value += c.il_penalty_weight * (cval - c.il_cap) * (cval - c.il_cap);
              outer = 2.0 * c.il_penalty_weight * (cval - c.il_cap);
            }
          } else {
            if (cval >= c.il_cap)
              fail(ErrorKind::numerical, "log-barrier undefined: filter constant " + std::to_string(cval) +
                                             " reached the cap " + std::to_string(c.il_cap));
            r.value -= c.il_penalty_weight * std::log(c.il_cap - cval);
            outer = c.il_penalty_weight / (c.il_cap - cval);
          }
          if (outer == 0.0) continue;
          double pw = 1.0;
          for (std::size_t k = 0; k < layer.num_taps(); ++k) {
            if (k > 0) pw *= lam;
            r.grads[offset + k * block + j + i * rows] += outer * sign * static_cast<double>(k) * pw;
          }
        }
      offset += layer.num_taps() * block;
    }
  }
  return r;
}

double cross_entropy(const Matrix& logits, const std::vector<int>& labels, Matrix* grad) {
  if (static_cast<std::size_t>(logits.cols()) != labels.size())
    fail(ErrorKind::invalid_argument, "cross_entropy: one label per column required");
  const double b = static_cast<double>(labels.size());
  if (grad) grad->resize(logits.rows(), logits.cols());
  double total = 0.0;
  for (Eigen::Index c = 0; c < logits.cols(); ++c) {
    const int y = labels[static_cast<std::size_t>(c)];
    if (y < 0 || y >= logits.rows()) fail(ErrorKind::invalid_argument, "cross_entropy: label out of range");
    const double top = logits.col(c).maxCoeff();
    const Vector e = (logits.col(c).array() - top).exp();
    const double z = e.sum();
    total += std::log(z) - (logits(y, c) - top);
    if (grad) {
      grad->col(c) = e / (z * b);
      (*grad)(y, c) -= 1.0 / b;
    }
  }
  return total / b;
}

namespace {

Matrix batch_signals(const LabeledDataset& data, const std::vector<std::size_t>& batch, std::vector<int>* labels) {
  Matrix x(static_cast<Eigen::Index>(data.num_nodes), static_cast<Eigen::Index>(batch.size()));
  if (labels) labels->clear();
  for (std::size_t b = 0; b < batch.size(); ++b) {
    const Sample& s = data.samples.at(batch[b]);
    x.col(static_cast<Eigen::Index>(b)) = s.signal;
    if (labels) labels->push_back(s.label);
  }
  return x;
}

}  // namespace

LossResult loss(const HennModel& model, const HypergraphContext& ctx, const LabeledDataset& data,
                const std::vector<std::size_t>& batch, const TrainConfig& c) {
  if (batch.empty()) fail(ErrorKind::invalid_argument, "loss: empty batch");
  std::vector<int> labels;
  const Matrix x = batch_signals(data, batch, &labels);
  HennCache cache;
  const Matrix logits = henn_logits(model, ctx, x, batch.size(), &cache);
  Matrix dlogits;
  LossResult r;
  r.ce = cross_entropy(logits, labels, &dlogits);
  r.grads = henn_backward(model, ctx, cache, dlogits);
  const PenaltyResult p = lipschitz_penalty(model, ctx, c);
  r.penalty = p.value;
  r.max_c = p.max_c;
  r.loss = r.ce + r.penalty;
  for (std::size_t i = 0; i < r.grads.size(); ++i) r.grads[i] += p.grads[i];
  return r;
}

void normalize_all(HennModel& model, const HypergraphContext& ctx) {
  for (auto& stage : model.stages) normalize_filters(stage.model, {&ctx.operator_for(stage.kind).eigenvalues()});
}

void normalize_all(GnnModel& model, const ShiftOperator& s) { normalize_filters(model, {&s.eigenvalues()}); }

double max_filter_lipschitz(const HennModel& model, const HypergraphContext& ctx) {
  double c = 0.0;
  for (const auto& stage : model.stages) {
    const Spectrum& sp = ctx.operator_for(stage.kind).spectrum();
    c = std::max(c, model_lipschitz(stage.model, sp.lambda_min(), sp.lambda_max()));
  }
  return c;
}

std::vector<LogRow> train(HennModel& model, const HypergraphContext& ctx, const LabeledDataset& data,
                          const std::vector<std::size_t>& train_idx, const TrainConfig& c, Rng& rng) {
  c.validate();
  if (train_idx.empty()) fail(ErrorKind::invalid_argument, "train: empty training set");
  std::vector<LogRow> log;
  AdamState state;
  std::vector<std::size_t> order = train_idx;
  std::vector<double> params = model.flatten();
  const auto path = [&model](std::size_t i) { return model.parameter_path(i); };
  for (std::size_t epoch = 0; epoch < c.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    for (std::size_t at = 0; at < order.size(); at += c.batch_size) {
      const std::vector<std::size_t> batch(order.begin() + static_cast<std::ptrdiff_t>(at),
                                           order.begin() + static_cast<std::ptrdiff_t>(std::min(at + c.batch_size, order.size())));
      const LossResult r = loss(model, ctx, data, batch, c);
      adam_step(params, r.grads, state, c, path);
      model.unflatten(params);
      log.push_back({state.step, r.loss, r.ce, r.penalty, effective_lr(c, state.step), r.max_c});
    }
    normalize_all(model, ctx);
    params = model.flatten();
  }
  return log;
}

double accuracy(const HennModel& model, const HypergraphContext& ctx, const LabeledDataset& data,
                const std::vector<std::size_t>& indices) {
  if (indices.empty()) fail(ErrorKind::invalid_argument, "accuracy: no samples");
  std::vector<int> labels;
  const Matrix x = batch_signals(data, indices, &labels);
  const Matrix logits = henn_logits(model, ctx, x, indices.size());
  std::size_t hits = 0;
  for (Eigen::Index c = 0; c < logits.cols(); ++c) {
    Eigen::Index best = 0;
    logits.col(c).maxCoeff(&best);
    if (best == labels[static_cast<std::size_t>(c)]) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(indices.size());
}

std::vector<std::vector<std::size_t>> fold_indices(const std::vector<std::size_t>& items, std::size_t k) {
  if (k == 0 || k > items.size()) fail(ErrorKind::invalid_argument, "fold_indices: need 1 <= k <= item count");
  std::vector<std::vector<std::size_t>> folds(k);
  const std::size_t base = items.size() / k, extra = items.size() % k;
  std::size_t at = 0;
  for (std::size_t f = 0; f < k; ++f) {
    const std::size_t size = base + (f < extra ? 1 : 0);
    folds[f].assign(items.begin() + static_cast<std::ptrdiff_t>(at),
                    items.begin() + static_cast<std::ptrdiff_t>(at + size));
    at += size;
  }
  return folds;
}

Score mean_sd(const std::vector<double>& xs) {
  Score s;
  if (xs.empty()) return s;
  s.mean = std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
  if (xs.size() > 1) {
    double acc = 0.0;
    for (double x : xs) acc += (x - s.mean) * (x - s.mean);
    s.sd = std::sqrt(acc / static_cast<double>(xs.size() - 1));
  }
  return s;
}

std::size_t select_ucb(const std::vector<Score>& scores) {
  if (scores.empty()) fail(ErrorKind::invalid_argument, "select_ucb: empty model space");
  std::size_t best = 0;
  for (std::size_t i = 1; i < scores.size(); ++i)
    if (scores[i].mean + scores[i].sd > scores[best].mean + scores[best].sd) best = i;
  return best;
}

ArchitectureResult cross_validate(const LabeledDataset& data, const Hypergraph& h,
                                  const std::vector<ArchitectureSpec>& space, const TrainConfig& c) {
  c.validate();
  if (space.empty()) fail(ErrorKind::config, "model_space: empty");
  std::vector<GsoKind> kinds;
  for (const auto& spec : space)
    for (GsoKind k : stage_kinds(spec.architecture))
      if (std::find(kinds.begin(), kinds.end(), k) == kinds.end()) kinds.push_back(k);
  const HypergraphContext ctx(h, kinds);
  const std::vector<std::size_t>& candidates = data.meta.sources;

  ArchitectureResult out;
  out.architecture = to_string(space[0].architecture);
  std::vector<double> val, test;
  for (std::size_t s = 0; s < c.shuffles; ++s) {
    std::vector<std::size_t> order = data.train;
    Rng shuffle_rng(derive_seed(c.seed, s, 0x5eed));
    std::shuffle(order.begin(), order.end(), shuffle_rng);
    const auto folds = fold_indices(order, c.folds);

    const std::size_t jobs = space.size() * c.folds;
    std::vector<double> acc(jobs, 0.0);
    std::vector<std::string> errors(jobs);
#pragma omp parallel for schedule(dynamic, 1)
    for (std::ptrdiff_t jj = 0; jj < static_cast<std::ptrdiff_t>(jobs); ++jj) {
      const auto job = static_cast<std::size_t>(jj);
      const std::size_t cand = job / c.folds, fold = job % c.folds;
      try {
        std::vector<std::size_t> fit;
        for (std::size_t f = 0; f < c.folds; ++f)
          if (f != fold) fit.insert(fit.end(), folds[f].begin(), folds[f].end());
        Rng rng(derive_seed(c.seed, s, cand + 1, fold + 1));
        HennModel model = make_model(space[cand], candidates, rng);
        normalize_all(model, ctx);
        train(model, ctx, data, fit, c, rng);
        acc[job] = accuracy(model, ctx, data, folds[fold]);
      } catch (const Error& e) {
        errors[job] = e.what();
      }
    }
    for (const auto& e : errors)
      if (!e.empty()) fail(ErrorKind::numerical, "cross-validation: " + e);

    ShuffleResult sr;
    for (std::size_t cand = 0; cand < space.size(); ++cand)
      sr.candidate_scores.push_back(mean_sd(std::vector<double>(acc.begin() + static_cast<std::ptrdiff_t>(cand * c.folds),
                                                                acc.begin() + static_cast<std::ptrdiff_t>((cand + 1) * c.folds))));
    sr.selected = select_ucb(sr.candidate_scores);
    sr.validation = sr.candidate_scores[sr.selected].mean;

    Rng rng(derive_seed(c.seed, s, sr.selected + 1, 0));
    HennModel model = make_model(space[sr.selected], candidates, rng);
    normalize_all(model, ctx);
    out.final_log = train(model, ctx, data, order, c, rng);
    sr.test = accuracy(model, ctx, data, data.test);
    sr.max_c = max_filter_lipschitz(model, ctx);
    out.max_c = std::max(out.max_c, sr.max_c);
    val.push_back(sr.validation);
    test.push_back(sr.test);
    out.shuffles.push_back(std::move(sr));
    out.final_model = std::move(model);
  }
  out.validation = mean_sd(val);
  out.test = mean_sd(test);
  return out;
}

}  // namespace hgsp
