#include "hgsp/henn.hpp"

#include <algorithm>
#include <cmath>

#include "hgsp/kernels.hpp"
#include "hgsp/spectral.hpp"

namespace hgsp {

Side side_of(GsoKind kind) {
  switch (kind) {
    case GsoKind::clique_henn:
    case GsoKind::hgnn:
    case GsoKind::hgnn_plus: return Side::node;
    case GsoKind::line_henn: return Side::edge;
    default: fail(ErrorKind::invalid_argument, to_string(kind) + " is not a hypergraph representation");
  }
}

namespace {

Matrix pool(const Matrix& x, const std::vector<std::vector<std::size_t>>& members, Eigen::MatrixXi* argmax) {
  Matrix out;
  Eigen::MatrixXi am;
  kernels::max_pool(x, members, out, am);
  if (argmax) *argmax = std::move(am);
  return out;
}

Matrix unpool(const Matrix& grad, const Eigen::MatrixXi& argmax, Eigen::Index input_rows) {
  Matrix out = Matrix::Zero(input_rows, grad.cols());
  for (Eigen::Index c = 0; c < grad.cols(); ++c)
    for (Eigen::Index j = 0; j < grad.rows(); ++j) out(argmax(j, c), c) += grad(j, c);
  return out;
}

}  // namespace

Matrix pool_node_to_edge(const Matrix& x, const Hypergraph& h) {
  if (static_cast<std::size_t>(x.rows()) != h.num_nodes())
    fail(ErrorKind::invalid_argument, "pool_node_to_edge: expected one row per node");
  return pool(x, h.edges(), nullptr);
}

Matrix pool_edge_to_node(const Matrix& x, const Hypergraph& h) {
  if (static_cast<std::size_t>(x.rows()) != h.num_edges())
    fail(ErrorKind::invalid_argument, "pool_edge_to_node: expected one row per hyperedge");
  return pool(x, h.memberships(), nullptr);
}

HypergraphContext::HypergraphContext(Hypergraph h, const std::vector<GsoKind>& kinds) : h_(std::move(h)) {
  for (GsoKind k : kinds)
    if (!gsos_.count(k)) gsos_.emplace(k, gso(h_, k));
}

const ShiftOperator& HypergraphContext::operator_for(GsoKind kind) const {
  auto it = gsos_.find(kind);
  if (it == gsos_.end()) fail(ErrorKind::invalid_argument, "context has no " + to_string(kind) + " operator");
  return it->second;
}

std::string to_string(Architecture a) {
  switch (a) {
    case Architecture::henn: return "henn";
    case Architecture::clique_only: return "clique";
    case Architecture::line_only: return "line";
    case Architecture::hgnn: return "hgnn";
  }
  return "henn";
}

Architecture parse_architecture(std::string_view name) {
  for (Architecture a : {Architecture::henn, Architecture::clique_only, Architecture::line_only, Architecture::hgnn})
    if (to_string(a) == name) return a;
  if (name == "clique-only") return Architecture::clique_only;
  if (name == "line-only") return Architecture::line_only;
  fail(ErrorKind::invalid_argument, "unknown architecture '" + std::string(name) + "'");
}

std::vector<GsoKind> stage_kinds(Architecture a) {
  switch (a) {
    case Architecture::henn: return {GsoKind::clique_henn, GsoKind::line_henn};
    case Architecture::clique_only: return {GsoKind::clique_henn};
    case Architecture::line_only: return {GsoKind::line_henn};
    case Architecture::hgnn: return {GsoKind::hgnn};
  }
  return {};
}

std::size_t HennModel::parameter_count() const {
  std::size_t n = 0;
  for (const auto& s : stages) n += s.model.parameter_count();
  return n;
}

std::vector<double> HennModel::flatten() const {
  std::vector<double> out;
  for (const auto& s : stages) {
    const auto p = s.model.flatten();
    out.insert(out.end(), p.begin(), p.end());
  }
  return out;
}

void HennModel::unflatten(const std::vector<double>& params) {
  if (params.size() != parameter_count()) fail(ErrorKind::invalid_argument, "unflatten: parameter count mismatch");
  std::size_t at = 0;
  for (auto& s : stages) {
    const std::size_t cnt = s.model.parameter_count();
    s.model.unflatten(std::vector<double>(params.begin() + static_cast<std::ptrdiff_t>(at),
                                          params.begin() + static_cast<std::ptrdiff_t>(at + cnt)));
    at += cnt;
  }
}

std::string HennModel::parameter_path(std::size_t flat_index) const {
  std::size_t at = 0;
  for (std::size_t i = 0; i < stages.size(); ++i) {
    const std::size_t cnt = stages[i].model.parameter_count();
    if (flat_index < at + cnt)
      return "stage" + std::to_string(i) + "(" + to_string(stages[i].kind) + ")." +
             stages[i].model.parameter_path(flat_index - at);
    at += cnt;
  }
  return "out-of-range";
}

std::size_t HennModel::total_layers() const {
  std::size_t n = 0;
  for (const auto& s : stages) n += s.model.depth();
  return n;
}

HennModel make_model(const ArchitectureSpec& spec, const std::vector<std::size_t>& candidates, Rng& rng) {
  if (spec.filter_layers == 0 || spec.taps == 0 || spec.hidden == 0)
    fail(ErrorKind::invalid_argument, "make_model: layers, taps and width must be positive");
  const auto kinds = stage_kinds(spec.architecture);
  if (kinds.size() > spec.filter_layers)
    fail(ErrorKind::invalid_argument, "make_model: fewer filter layers than stages");
  HennModel m;
  m.architecture = to_string(spec.architecture);
  m.candidates = candidates;
  const std::size_t per = spec.filter_layers / kinds.size();
  std::size_t extra = spec.filter_layers % kinds.size();
  std::size_t produced = 0;
  for (std::size_t s = 0; s < kinds.size(); ++s) {
    const std::size_t layers = per + (extra > 0 ? 1 : 0);
    if (extra > 0) --extra;
    std::vector<std::size_t> widths;
    for (std::size_t l = 0; l <= layers; ++l) {
      const std::size_t global = produced + l;
      widths.push_back(global == 0 || global == spec.filter_layers ? 1 : spec.hidden);
    }
    produced += layers;
    m.stages.push_back({kinds[s], GnnModel::random(widths, spec.taps, spec.nonlinearity, spec.init_scale, rng)});
  }
  m.stages.back().model.linear_output = true;
  return m;
}

Matrix henn_forward(const HennModel& model, const HypergraphContext& ctx, const Matrix& x0, std::size_t batch,
                    HennCache* cache) {
  const Hypergraph& h = ctx.hypergraph();
  if (static_cast<std::size_t>(x0.rows()) != h.num_nodes())
    fail(ErrorKind::invalid_argument, "henn_forward: expected one row per node");
  if (cache) {
    *cache = HennCache{};
    cache->batch = batch;
    cache->stages.resize(model.stages.size());
  }
  Matrix x = x0;
  Side side = Side::node;
  auto cross = [&](Side to) {
    Eigen::MatrixXi am;
    const Eigen::Index rows = x.rows();
    x = pool(x, to == Side::edge ? h.edges() : h.memberships(), cache ? &am : nullptr);
    if (cache) {
      cache->pool_argmax.push_back(std::move(am));
      cache->pool_input_rows.push_back(rows);
    }
    side = to;
  };
  for (std::size_t s = 0; s < model.stages.size(); ++s) {
    const Stage& st = model.stages[s];
    const Side want = side_of(st.kind);
    if (want != side) cross(want);
    x = forward(st.model, ctx.operator_for(st.kind).sparse(), x, batch, cache ? &cache->stages[s] : nullptr);
  }
  if (side == Side::node) cross(Side::edge);
  return x;
}

Matrix readout(const HennModel& model, const Matrix& edge_output) {
  Matrix logits(static_cast<Eigen::Index>(model.candidates.size()), edge_output.cols());
  for (std::size_t c = 0; c < model.candidates.size(); ++c) {
    if (model.candidates[c] >= static_cast<std::size_t>(edge_output.rows()))
      fail(ErrorKind::invalid_argument, "readout: candidate hyperedge out of range");
    logits.row(static_cast<Eigen::Index>(c)) = edge_output.row(static_cast<Eigen::Index>(model.candidates[c]));
  }
  return logits;
}

Matrix henn_logits(const HennModel& model, const HypergraphContext& ctx, const Matrix& x0, std::size_t batch,
                   HennCache* cache) {
  return readout(model, henn_forward(model, ctx, x0, batch, cache));
}

std::vector<double> henn_backward(const HennModel& model, const HypergraphContext& ctx, const HennCache& cache,
                                  const Matrix& logit_grad, Matrix* input_grad) {
  const Hypergraph& h = ctx.hypergraph();
  Matrix grad = Matrix::Zero(static_cast<Eigen::Index>(h.num_edges()), logit_grad.cols());
  for (std::size_t c = 0; c < model.candidates.size(); ++c)
    grad.row(static_cast<Eigen::Index>(model.candidates[c])) += logit_grad.row(static_cast<Eigen::Index>(c));

  // Replay the side sequence of the forward pass in reverse.
  std::vector<bool> pool_before(model.stages.size(), false);
  Side side = Side::node;
  for (std::size_t s = 0; s < model.stages.size(); ++s) {
    const Side want = side_of(model.stages[s].kind);
    pool_before[s] = want != side;
    side = want;
  }
  std::size_t pool_index = cache.pool_argmax.size();
  auto uncross = [&]() {
    --pool_index;
    grad = unpool(grad, cache.pool_argmax[pool_index], cache.pool_input_rows[pool_index]);
  };
  if (side == Side::node) uncross();

  std::vector<std::vector<double>> per_stage(model.stages.size());
  for (std::size_t s = model.stages.size(); s-- > 0;) {
    const Stage& st = model.stages[s];
    GnnGradients g = backward(st.model, ctx.operator_for(st.kind).sparse(), cache.stages[s], grad);
    per_stage[s] = g.flatten();
    grad = std::move(g.input);
    if (pool_before[s]) uncross();
  }
  if (input_grad) *input_grad = grad;
  std::vector<double> out;
  out.reserve(model.parameter_count());
  for (const auto& p : per_stage) out.insert(out.end(), p.begin(), p.end());
  return out;
}

Matrix baseline_forward(const HennModel& model, const HypergraphContext& ctx, const Matrix& x0) {
  return henn_logits(model, ctx, x0, 1, nullptr);
}

double theorem2_bound(const std::vector<Representation>& reps, const std::vector<double>& epsilons,
                      double lipschitz) {
  if (reps.size() != epsilons.size()) fail(ErrorKind::invalid_argument, "theorem2_bound: size mismatch");
  double prod = 1.0;
  for (const auto& r : reps) prod *= std::pow(static_cast<double>(r.features), static_cast<double>(r.layers));
  double total = 0.0;
  for (std::size_t i = 0; i < reps.size(); ++i)
    total += lipschitz * static_cast<double>(reps[i].layers) * epsilons[i] * prod;
  return total;
}

Theorem2Report check_theorem2(const HennModel& model, const HypergraphContext& a, const HypergraphContext& b,
                              std::size_t trials, Rng& rng, double slack) {
  if (a.hypergraph().num_nodes() != b.hypergraph().num_nodes() ||
      a.hypergraph().num_edges() != b.hypergraph().num_edges())
    fail(ErrorKind::invalid_argument, "check_theorem2: hypergraphs differ in size");
  Theorem2Report r;
  r.trials = trials;
  std::vector<Representation> reps;
  double eps_sq = 0.0;
  for (const auto& st : model.stages) {
    const ShiftOperator& sa = a.operator_for(st.kind);
    const ShiftOperator& sb = b.operator_for(st.kind);
    const double eps = spectral_similarity(sa, sb).epsilon;
    r.epsilons.push_back(eps);
    eps_sq += eps * eps;
    const double lo = std::min(sa.spectrum().lambda_min(), sb.spectrum().lambda_min());
    const double hi = std::max(sa.spectrum().lambda_max(), sb.spectrum().lambda_max());
    r.lipschitz = std::max(r.lipschitz, model_lipschitz(st.model, lo, hi));
    const auto w = st.model.widths();
    reps.push_back({st.model.depth(), *std::max_element(w.begin(), w.end())});
  }
  r.bound = theorem2_bound(reps, r.epsilons, r.lipschitz) + slack * eps_sq;
  std::normal_distribution<double> normal(0.0, 1.0);
  const auto n = static_cast<Eigen::Index>(a.hypergraph().num_nodes());
  for (std::size_t t = 0; t < trials; ++t) {
    Matrix x(n, 1);
    for (Eigen::Index i = 0; i < n; ++i) x(i, 0) = normal(rng);
    x /= x.norm();
    const double d = feature_norm_sum(henn_forward(model, a, x) - henn_forward(model, b, x));
    r.max_deviation = std::max(r.max_deviation, d);
    if (d > r.bound) ++r.violations;
  }
  return r;
}

}  // namespace hgsp
