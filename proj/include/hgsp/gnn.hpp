#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "hgsp/common.hpp"
#include "hgsp/filters.hpp"
#include "hgsp/shift_operator.hpp"

namespace hgsp {

/// Pointwise nonlinearities; all are 1-Lipschitz with sigma(0) = 0. The
/// sigmoid is shifted, 1/(1+e^-x) - 1/2.
enum class Nonlinearity { relu, tanh, sigmoid, identity };

std::string to_string(Nonlinearity s);
Nonlinearity parse_nonlinearity(std::string_view name);
double activate(Nonlinearity s, double x);
/// Derivative at the pre-activation value x (relu: 0 at x <= 0).
double activate_derivative(Nonlinearity s, double x);

/// One graph-convolution layer. taps[k] is an (f_in x f_out) matrix whose
/// entry (j, i) is the k-th coefficient of the filter from input feature j to
/// output feature i. Output: sigma(sum_k S^k X taps[k]).
struct GnnLayer {
  std::vector<Matrix> taps;

  std::size_t num_taps() const { return taps.size(); }
  std::size_t in() const { return taps.empty() ? 0 : static_cast<std::size_t>(taps[0].rows()); }
  std::size_t out() const { return taps.empty() ? 0 : static_cast<std::size_t>(taps[0].cols()); }
  GraphFilter filter(std::size_t out_feature, std::size_t in_feature) const;
  void set_filter(std::size_t out_feature, std::size_t in_feature, const GraphFilter& f);
};

struct GnnModel {
  std::vector<GnnLayer> layers;
  Nonlinearity nonlinearity = Nonlinearity::relu;
  /// Last layer skips the nonlinearity. Used when the output feeds softmax logits:
  /// a rectified logit layer has a dead fixed point with zero gradient.
  bool linear_output = false;

  /// (f_0, ..., f_L)
  std::vector<std::size_t> widths() const;
  std::size_t depth() const { return layers.size(); }
  std::size_t parameter_count() const;
  std::vector<double> flatten() const;
  void unflatten(const std::vector<double>& params);
  /// Human-readable parameter path for a flat index, e.g. "layer1.tap2[0,1]".
  std::string parameter_path(std::size_t flat_index) const;

  static GnnModel zeros(const std::vector<std::size_t>& widths, std::size_t taps, Nonlinearity s);
  /// Coefficients i.i.d. uniform in [-scale, scale].
  static GnnModel random(const std::vector<std::size_t>& widths, std::size_t taps, Nonlinearity s,
                         double scale, Rng& rng);
};

/// Intermediate values kept by forward for the backward pass.
struct GnnCache {
  std::size_t batch = 1;
  std::vector<std::vector<Matrix>> shifted;  // [layer][k] = S^k X_{l-1}
  std::vector<Matrix> pre_activation;        // [layer]
};

/// Forward pass. `x0` holds `batch` samples side by side, each occupying f_0
/// consecutive columns, so x0 is n x (batch * f_0). Samples are independent.
Matrix forward(const GnnModel& model, const SparseMatrix& s, const Matrix& x0, std::size_t batch = 1,
               GnnCache* cache = nullptr);
Matrix forward(const GnnModel& model, const ShiftOperator& s, const Matrix& x0);

struct GnnGradients {
  std::vector<std::vector<Matrix>> taps;  // same shapes as the model taps
  Matrix input;                           // dLoss / dx0

  std::vector<double> flatten() const;
};

/// Reverse-mode gradients given dLoss/dOutput (same shape as the forward output).
GnnGradients backward(const GnnModel& model, const SparseMatrix& s, const GnnCache& cache,
                      const Matrix& upstream);

/// Every (layer, out, in) filter normalized over the union of the spectra.
void normalize_filters(GnnModel& model, const std::vector<const Vector*>& spectra);

/// Largest integral-Lipschitz constant over all filters on [lo, hi].
double model_lipschitz(const GnnModel& model, double lo, double hi);

/// C L f^L eps when every width is equal to f, otherwise the product form
/// C L eps prod_{s=0}^{L} f_s.
double transferability_bound(const std::vector<std::size_t>& widths, double epsilon, double lipschitz);
double transferability_bound(const GnnModel& model, double epsilon, double lipschitz);

struct Theorem1Report {
  std::size_t trials = 0;
  double max_deviation = 0.0;  // max over trials of sum_g ||x_L^g(S) - x_L^g(S~)||_2
  double lipschitz = 0.0;
  double bound = 0.0;          // transferability_bound + slack eps^2
  std::size_t violations = 0;
};

/// Samples `trials` inputs of unit Frobenius norm and compares the output
/// deviation between S and S~ against the transferability bound. The
/// Lipschitz constant is taken over the hull of both spectra.
Theorem1Report check_theorem1(const GnnModel& model, const ShiftOperator& s, const ShiftOperator& s_tilde,
                              double epsilon, std::size_t trials, Rng& rng, double slack = kDefaultSlack);

/// Sum over output features of the per-feature 2-norm.
double feature_norm_sum(const Matrix& x);

}  // namespace hgsp
