#include "hgsp/filters.hpp"

#include <algorithm>
#include <cmath>

#include "hgsp/kernels.hpp"

namespace hgsp {

bool GraphFilter::is_zero() const {
  return std::all_of(coeffs.begin(), coeffs.end(), [](double c) { return c == 0.0; });
}

Matrix apply(const GraphFilter& f, const SparseMatrix& s, const Matrix& x) {
  if (s.cols() != x.rows()) fail(ErrorKind::invalid_argument, "apply: signal dimension does not match the operator");
  if (f.coeffs.empty()) return Matrix::Zero(x.rows(), x.cols());
  Matrix out = f.coeffs[0] * x;
  Matrix z = x;
  for (std::size_t k = 1; k < f.coeffs.size(); ++k) {
    z = kernels::shift(s, z);
    out += f.coeffs[k] * z;
  }
  return out;
}

Vector apply(const GraphFilter& f, const ShiftOperator& s, const Vector& x) {
  if (x.size() != s.size()) fail(ErrorKind::invalid_argument, "apply: signal dimension does not match the operator");
  return apply(f, s.sparse(), Matrix(x)).col(0);
}

double frequency_response(const GraphFilter& f, double lambda) {
  double acc = 0.0;
  for (auto it = f.coeffs.rbegin(); it != f.coeffs.rend(); ++it) acc = acc * lambda + *it;
  return acc;
}

double lambda_derivative(const GraphFilter& f, double lambda) {
  // sum_k k h_k lambda^k, Horner on the coefficients k h_k.
  double acc = 0.0;
  for (std::size_t k = f.coeffs.size(); k-- > 1;) acc = acc * lambda + static_cast<double>(k) * f.coeffs[k];
  return acc * lambda;
}

IntegralLipschitz integral_lipschitz_constant(const GraphFilter& f, double lambda_min, double lambda_max,
                                              std::size_t grid_points) {
  if (lambda_min > lambda_max) fail(ErrorKind::invalid_argument, "integral_lipschitz_constant: empty interval");
  IntegralLipschitz c;
  c.endpoint = std::max(std::abs(lambda_derivative(f, lambda_min)), std::abs(lambda_derivative(f, lambda_max)));
  const std::size_t pts = std::max<std::size_t>(grid_points, 2);
  for (std::size_t i = 0; i < pts; ++i) {
    const double t = static_cast<double>(i) / static_cast<double>(pts - 1);
    const double lambda = lambda_min + t * (lambda_max - lambda_min);
    c.grid = std::max(c.grid, std::abs(lambda_derivative(f, lambda)));
  }
  return c;
}

double max_response(const GraphFilter& f, const Vector& eigenvalues) {
  double top = 0.0;
  for (Eigen::Index i = 0; i < eigenvalues.size(); ++i)
    top = std::max(top, std::abs(frequency_response(f, eigenvalues(i))));
  return top;
}

GraphFilter normalize(const GraphFilter& f, const std::vector<const Vector*>& spectra) {
  double top = 0.0;
  for (const Vector* ev : spectra) top = std::max(top, max_response(f, *ev));
  if (top <= 1.0) return f;
  GraphFilter out = f;
  for (double& c : out.coeffs) c /= top;
  return out;
}

GraphFilter normalize(const GraphFilter& f, const ShiftOperator& s) { return normalize(f, {&s.eigenvalues()}); }

Matrix filter_matrix(const GraphFilter& f, const Matrix& s) {
  const auto n = s.rows();
  Matrix out = Matrix::Zero(n, n);
  Matrix power = Matrix::Identity(n, n);
  for (std::size_t k = 0; k < f.coeffs.size(); ++k) {
    if (k > 0) power = power * s;
    out += f.coeffs[k] * power;
  }
  return out;
}

Prop1Report check_prop1_bound(const GraphFilter& f, const ShiftOperator& s, const ShiftOperator& s_tilde,
                              double epsilon, double slack) {
  Prop1Report r;
  r.epsilon = epsilon;
  r.one_tap = f.taps() <= 2;
  const Matrix diff = filter_matrix(f, s_tilde.matrix()) - filter_matrix(f, s.matrix());
  r.difference = operator_norm_symmetric(0.5 * (diff + diff.transpose()));
  const double lo = std::min(s.spectrum().lambda_min(), s_tilde.spectrum().lambda_min());
  const double hi = std::max(s.spectrum().lambda_max(), s_tilde.spectrum().lambda_max());
  r.lipschitz = integral_lipschitz_constant(f, lo, hi).value();
  if (r.one_tap) {
    r.bound = r.lipschitz * epsilon;
    r.holds = r.difference <= r.bound + 1e-8;
  } else {
    r.bound = r.lipschitz * epsilon + slack * epsilon * epsilon;
    r.holds = r.difference <= r.bound;
  }
  return r;
}

}  // namespace hgsp
