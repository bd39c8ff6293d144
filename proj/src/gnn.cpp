#include "hgsp/gnn.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "hgsp/kernels.hpp"

namespace hgsp {

std::string to_string(Nonlinearity s) {
  switch (s) {
    case Nonlinearity::relu: return "relu";
    case Nonlinearity::tanh: return "tanh";
    case Nonlinearity::sigmoid: return "sigmoid-normalized";
    case Nonlinearity::identity: return "identity";
  }
  return "identity";
}

Nonlinearity parse_nonlinearity(std::string_view name) {
  for (Nonlinearity s : {Nonlinearity::relu, Nonlinearity::tanh, Nonlinearity::sigmoid, Nonlinearity::identity})
    if (to_string(s) == name) return s;
  if (name == "sigmoid") return Nonlinearity::sigmoid;
  fail(ErrorKind::invalid_argument, "unknown nonlinearity '" + std::string(name) + "'");
}

double activate(Nonlinearity s, double x) {
  switch (s) {
    case Nonlinearity::relu: return x > 0.0 ? x : 0.0;
    case Nonlinearity::tanh: return std::tanh(x);
    case Nonlinearity::sigmoid: return 1.0 / (1.0 + std::exp(-x)) - 0.5;
    case Nonlinearity::identity: return x;
  }
  return x;
}

double activate_derivative(Nonlinearity s, double x) {
  switch (s) {
    case Nonlinearity::relu: return x > 0.0 ? 1.0 : 0.0;
    case Nonlinearity::tanh: {
      const double t = std::tanh(x);
      return 1.0 - t * t;
    }
    case Nonlinearity::sigmoid: {
      const double p = 1.0 / (1.0 + std::exp(-x));
      return p * (1.0 - p);
    }
    case Nonlinearity::identity: return 1.0;
  }
  return 1.0;
}

GraphFilter GnnLayer::filter(std::size_t out_feature, std::size_t in_feature) const {
  GraphFilter f;
  f.coeffs.reserve(taps.size());
  for (const Matrix& t : taps)
    f.coeffs.push_back(t(static_cast<Eigen::Index>(in_feature), static_cast<Eigen::Index>(out_feature)));
  return f;
}

void GnnLayer::set_filter(std::size_t out_feature, std::size_t in_feature, const GraphFilter& f) {
  if (f.coeffs.size() != taps.size()) fail(ErrorKind::invalid_argument, "set_filter: tap count mismatch");
  for (std::size_t k = 0; k < taps.size(); ++k)
    taps[k](static_cast<Eigen::Index>(in_feature), static_cast<Eigen::Index>(out_feature)) = f.coeffs[k];
}

std::vector<std::size_t> GnnModel::widths() const {
  std::vector<std::size_t> w;
  if (layers.empty()) return w;
  w.push_back(layers.front().in());
  for (const auto& l : layers) w.push_back(l.out());
  return w;
}

std::size_t GnnModel::parameter_count() const {
  std::size_t count = 0;
  for (const auto& l : layers)
    for (const auto& t : l.taps) count += static_cast<std::size_t>(t.size());
  return count;
}

std::vector<double> GnnModel::flatten() const {
  std::vector<double> out;
  out.reserve(parameter_count());
  for (const auto& l : layers)
    for (const auto& t : l.taps) out.insert(out.end(), t.data(), t.data() + t.size());
  return out;
}

void GnnModel::unflatten(const std::vector<double>& params) {
  if (params.size() != parameter_count()) fail(ErrorKind::invalid_argument, "unflatten: parameter count mismatch");
  std::size_t at = 0;
  for (auto& l : layers)
    for (auto& t : l.taps) {
      std::copy_n(params.begin() + static_cast<std::ptrdiff_t>(at), t.size(), t.data());
      at += static_cast<std::size_t>(t.size());
    }
}

std::string GnnModel::parameter_path(std::size_t flat_index) const {
  std::size_t at = 0;
  for (std::size_t l = 0; l < layers.size(); ++l)
    for (std::size_t k = 0; k < layers[l].taps.size(); ++k) {
      const Matrix& t = layers[l].taps[k];
      const auto size = static_cast<std::size_t>(t.size());
      if (flat_index < at + size) {
        const auto local = static_cast<Eigen::Index>(flat_index - at);
        std::ostringstream os;
        os << "layer" << l << ".tap" << k << "[in=" << local % t.rows() << ",out=" << local / t.rows() << "]";
        return os.str();
      }
      at += size;
    }
  return "out-of-range";
}

GnnModel GnnModel::zeros(const std::vector<std::size_t>& widths, std::size_t taps, Nonlinearity s) {
  if (widths.size() < 2 || taps == 0) fail(ErrorKind::invalid_argument, "GnnModel: need >= 1 layer and >= 1 tap");
  GnnModel m;
  m.nonlinearity = s;
  for (std::size_t l = 1; l < widths.size(); ++l) {
    GnnLayer layer;
    layer.taps.assign(taps, Matrix::Zero(static_cast<Eigen::Index>(widths[l - 1]), static_cast<Eigen::Index>(widths[l])));
    m.layers.push_back(std::move(layer));
  }
  return m;
}

GnnModel GnnModel::random(const std::vector<std::size_t>& widths, std::size_t taps, Nonlinearity s, double scale,
                          Rng& rng) {
  GnnModel m = zeros(widths, taps, s);
  std::uniform_real_distribution<double> uni(-scale, scale);
  for (auto& l : m.layers)
    for (auto& t : l.taps)
      for (Eigen::Index i = 0; i < t.size(); ++i) t.data()[i] = uni(rng);
  return m;
}

namespace {

Nonlinearity layer_nonlinearity(const GnnModel& m, std::size_t l) {
  return m.linear_output && l + 1 == m.layers.size() ? Nonlinearity::identity : m.nonlinearity;
}

}  // namespace

Matrix forward(const GnnModel& model, const SparseMatrix& s, const Matrix& x0, std::size_t batch, GnnCache* cache) {
  if (model.layers.empty()) return x0;
  if (x0.rows() != s.rows()) fail(ErrorKind::invalid_argument, "forward: signal length does not match the operator");
  if (static_cast<std::size_t>(x0.cols()) != batch * model.layers.front().in())
    fail(ErrorKind::invalid_argument, "forward: input feature count mismatch");
  if (cache) {
    cache->batch = batch;
    cache->shifted.assign(model.layers.size(), {});
    cache->pre_activation.assign(model.layers.size(), Matrix());
  }
  Matrix x = x0;
  for (std::size_t l = 0; l < model.layers.size(); ++l) {
    const GnnLayer& layer = model.layers[l];
    const auto fin = static_cast<Eigen::Index>(layer.in());
    const auto fout = static_cast<Eigen::Index>(layer.out());
    if (x.cols() != static_cast<Eigen::Index>(batch) * fin)
      fail(ErrorKind::invalid_argument, "forward: layer width mismatch");
    Matrix z = Matrix::Zero(x.rows(), static_cast<Eigen::Index>(batch) * fout);
    Matrix p = x;
    std::vector<Matrix> shifted;
    for (std::size_t k = 0; k < layer.taps.size(); ++k) {
      if (k > 0) p = kernels::shift(s, p);
      for (std::size_t b = 0; b < batch; ++b) {
        const auto bi = static_cast<Eigen::Index>(b);
        z.middleCols(bi * fout, fout).noalias() += p.middleCols(bi * fin, fin) * layer.taps[k];
      }
      if (cache) shifted.push_back(p);
    }
    const Nonlinearity act = layer_nonlinearity(model, l);
    x = z.unaryExpr([&](double v) { return activate(act, v); });
    if (cache) {
      cache->shifted[l] = std::move(shifted);
      cache->pre_activation[l] = std::move(z);
    }
  }
  return x;
}

Matrix forward(const GnnModel& model, const ShiftOperator& s, const Matrix& x0) {
  return forward(model, s.sparse(), x0, 1, nullptr);
}

std::vector<double> GnnGradients::flatten() const {
  std::vector<double> out;
  for (const auto& layer : taps)
    for (const auto& t : layer) out.insert(out.end(), t.data(), t.data() + t.size());
  return out;
}

GnnGradients backward(const GnnModel& model, const SparseMatrix& s, const GnnCache& cache, const Matrix& upstream) {
  GnnGradients g;
  g.taps.resize(model.layers.size());
  if (model.layers.empty()) {
    g.input = upstream;
    return g;
  }
  if (cache.pre_activation.size() != model.layers.size())
    fail(ErrorKind::invalid_argument, "backward: cache does not match the model");
  const auto batch = static_cast<Eigen::Index>(cache.batch);
  Matrix grad = upstream;
  for (std::size_t l = model.layers.size(); l-- > 0;) {
    const GnnLayer& layer = model.layers[l];
    const auto fin = static_cast<Eigen::Index>(layer.in());
    const auto fout = static_cast<Eigen::Index>(layer.out());
    const Matrix& z = cache.pre_activation[l];
    if (grad.rows() != z.rows() || grad.cols() != z.cols())
      fail(ErrorKind::invalid_argument, "backward: upstream gradient shape mismatch");
    const Nonlinearity act = layer_nonlinearity(model, l);
    const Matrix dz = grad.cwiseProduct(z.unaryExpr([&](double v) { return activate_derivative(act, v); }));

    g.taps[l].assign(layer.taps.size(), Matrix::Zero(fin, fout));
    std::vector<Matrix> back(layer.taps.size(), Matrix(z.rows(), batch * fin));
    for (std::size_t k = 0; k < layer.taps.size(); ++k) {
      const Matrix& p = cache.shifted[l][k];
      for (Eigen::Index b = 0; b < batch; ++b) {
        g.taps[l][k].noalias() += p.middleCols(b * fin, fin).transpose() * dz.middleCols(b * fout, fout);
        back[k].middleCols(b * fin, fin).noalias() = dz.middleCols(b * fout, fout) * layer.taps[k].transpose();
      }
    }
    // dX = sum_k S^k back[k], evaluated by Horner's rule (S symmetric).
    Matrix acc = back.back();
    for (std::size_t k = layer.taps.size() - 1; k-- > 0;) acc = kernels::shift(s, acc) + back[k];
    grad = std::move(acc);
  }
  g.input = std::move(grad);
  return g;
}

void normalize_filters(GnnModel& model, const std::vector<const Vector*>& spectra) {
  for (auto& layer : model.layers)
    for (std::size_t i = 0; i < layer.out(); ++i)
      for (std::size_t j = 0; j < layer.in(); ++j) layer.set_filter(i, j, normalize(layer.filter(i, j), spectra));
}

double model_lipschitz(const GnnModel& model, double lo, double hi) {
  double c = 0.0;
  for (const auto& layer : model.layers)
    for (std::size_t i = 0; i < layer.out(); ++i)
      for (std::size_t j = 0; j < layer.in(); ++j)
        c = std::max(c, integral_lipschitz_constant(layer.filter(i, j), lo, hi).value());
  return c;
}

double transferability_bound(const std::vector<std::size_t>& widths, double epsilon, double lipschitz) {
  if (widths.size() < 2) return 0.0;
  const double depth = static_cast<double>(widths.size() - 1);
  const bool uniform = std::all_of(widths.begin(), widths.end(), [&](std::size_t w) { return w == widths[0]; });
  if (uniform) return lipschitz * depth * std::pow(static_cast<double>(widths[0]), depth) * epsilon;
  double prod = 1.0;
  for (std::size_t w : widths) prod *= static_cast<double>(w);
  return lipschitz * depth * prod * epsilon;
}

double transferability_bound(const GnnModel& model, double epsilon, double lipschitz) {
  return transferability_bound(model.widths(), epsilon, lipschitz);
}

double feature_norm_sum(const Matrix& x) {
  double total = 0.0;
  for (Eigen::Index c = 0; c < x.cols(); ++c) total += x.col(c).norm();
  return total;
}

Theorem1Report check_theorem1(const GnnModel& model, const ShiftOperator& s, const ShiftOperator& s_tilde,
                              double epsilon, std::size_t trials, Rng& rng, double slack) {
  Theorem1Report r;
  r.trials = trials;
  const double lo = std::min(s.spectrum().lambda_min(), s_tilde.spectrum().lambda_min());
  const double hi = std::max(s.spectrum().lambda_max(), s_tilde.spectrum().lambda_max());
  r.lipschitz = model_lipschitz(model, lo, hi);
  r.bound = transferability_bound(model, epsilon, r.lipschitz) + slack * epsilon * epsilon;

  const auto f0 = static_cast<Eigen::Index>(model.widths().front());
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<Matrix> inputs(trials, Matrix(s.size(), f0));
  for (auto& x : inputs) {
    for (Eigen::Index i = 0; i < x.size(); ++i) x.data()[i] = normal(rng);
    x /= x.norm();
  }
  std::vector<double> dev(trials, 0.0);
  const auto count = static_cast<std::ptrdiff_t>(trials);
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t t = 0; t < count; ++t) {
    const auto& x = inputs[static_cast<std::size_t>(t)];
    dev[static_cast<std::size_t>(t)] =
        feature_norm_sum(forward(model, s.sparse(), x) - forward(model, s_tilde.sparse(), x));
  }
  for (double d : dev) {
    r.max_deviation = std::max(r.max_deviation, d);
    if (d > r.bound) ++r.violations;
  }
  return r;
}

}  // namespace hgsp
