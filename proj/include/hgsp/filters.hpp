#pragma once

#include <vector>

#include "hgsp/common.hpp"
#include "hgsp/shift_operator.hpp"

namespace hgsp {

/// Polynomial graph filter H(S) = sum_k h_k S^k with K + 1 = coeffs.size() taps.
struct GraphFilter {
  std::vector<double> coeffs;

  std::size_t taps() const { return coeffs.size(); }
  bool is_zero() const;
};

/// Default O(eps^2) slack constant shared by the bound checkers.
inline constexpr double kDefaultSlack = 2.0;
/// Grid resolution for the integral-Lipschitz sweep.
inline constexpr std::size_t kLipschitzGrid = 1024;

/// H(S) x through K successive shifts; S^k is never formed.
Vector apply(const GraphFilter& f, const ShiftOperator& s, const Vector& x);
Matrix apply(const GraphFilter& f, const SparseMatrix& s, const Matrix& x);

/// h(lambda) by Horner's rule.
double frequency_response(const GraphFilter& f, double lambda);
/// lambda h'(lambda).
double lambda_derivative(const GraphFilter& f, double lambda);

struct IntegralLipschitz {
  /// max(|sum_k k h_k lo^k|, |sum_k k h_k hi^k|)
  double endpoint = 0.0;
  /// max |lambda h'(lambda)| over an evenly spaced grid on [lo, hi]
  double grid = 0.0;
  /// The constant used by the bound checkers.
  double value() const { return std::max(endpoint, grid); }
};

IntegralLipschitz integral_lipschitz_constant(const GraphFilter& f, double lambda_min, double lambda_max,
                                              std::size_t grid_points = kLipschitzGrid);

/// Largest |h(lambda_i)| over the given eigenvalues.
double max_response(const GraphFilter& f, const Vector& eigenvalues);

/// Coefficients divided by max_i |h(lambda_i(S))| when that exceeds one.
GraphFilter normalize(const GraphFilter& f, const ShiftOperator& s);
/// Same, over the union of several spectra.
GraphFilter normalize(const GraphFilter& f, const std::vector<const Vector*>& spectra);

/// Dense H(S); intended for small operators.
Matrix filter_matrix(const GraphFilter& f, const Matrix& s);

struct Prop1Report {
  double difference = 0.0;  // ||H(S~) - H(S)||_op
  double lipschitz = 0.0;   // C over the hull of both spectra
  double epsilon = 0.0;
  double bound = 0.0;       // C eps (+ slack eps^2 unless one-tap)
  bool one_tap = false;
  bool holds = false;
};

/// Compares ||H(S~) - H(S)||_op with C eps + slack eps^2. One-tap filters
/// h_0 I + h_1 S are held to C eps with no second-order slack (1e-8 absolute
/// tolerance for rounding).
Prop1Report check_prop1_bound(const GraphFilter& f, const ShiftOperator& s, const ShiftOperator& s_tilde,
                              double epsilon, double slack = kDefaultSlack);

}  // namespace hgsp
