#include "hgsp/shift_operator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace hgsp {

std::string to_string(GsoKind kind) {
  switch (kind) {
    case GsoKind::clique_henn: return "clique-henn";
    case GsoKind::line_henn: return "line-henn";
    case GsoKind::hgnn: return "hgnn";
    case GsoKind::hgnn_plus: return "hgnn-plus";
    case GsoKind::normalized_laplacian: return "normalized-laplacian";
    case GsoKind::adjacency_normalized: return "adjacency-normalized";
    case GsoKind::custom: return "custom";
  }
  return "custom";
}

GsoKind parse_gso_kind(std::string_view name) {
  for (GsoKind k : {GsoKind::clique_henn, GsoKind::line_henn, GsoKind::hgnn, GsoKind::hgnn_plus,
                    GsoKind::normalized_laplacian, GsoKind::adjacency_normalized, GsoKind::custom})
    if (to_string(k) == name) return k;
  fail(ErrorKind::invalid_argument, "unknown GSO kind '" + std::string(name) + "'");
}

double Spectrum::smallest_nonzero() const {
  for (Eigen::Index i = 0; i < eigenvalues.size(); ++i)
    if (std::abs(eigenvalues(i)) > zero_tol) return eigenvalues(i);
  return std::numeric_limits<double>::infinity();
}

double zero_tolerance(double lambda_max) { return 1e-9 * std::max(1.0, lambda_max); }

namespace {

void check_symmetric(const Matrix& m, double op_norm) {
  if (m.rows() != m.cols()) fail(ErrorKind::invalid_argument, "operator is not square");
  const double asym = (m - m.transpose()).norm() * 0.5;
  if (asym > 1e-10 * std::max(op_norm, std::numeric_limits<double>::min())) {
    std::ostringstream os;
    os << "operator is not symmetric: ||S - S^T||/2 = " << asym << " exceeds 1e-10 * ||S||_op";
    fail(ErrorKind::invalid_argument, os.str());
  }
}

}  // namespace

Spectrum eigendecompose(const Matrix& m, bool with_vectors) {
  if (m.rows() != m.cols()) fail(ErrorKind::invalid_argument, "eigendecompose: matrix is not square");
  if (!m.allFinite()) fail(ErrorKind::numerical, "eigendecompose: non-finite entries");
  Spectrum out;
  if (m.rows() == 0) return out;
  const Matrix sym = 0.5 * (m + m.transpose());
  Eigen::SelfAdjointEigenSolver<Matrix> solver(
      sym, with_vectors ? Eigen::ComputeEigenvectors : Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) fail(ErrorKind::numerical, "eigendecompose: solver did not converge");
  out.eigenvalues = solver.eigenvalues();
  const double op = std::max(std::abs(out.lambda_min()), std::abs(out.lambda_max()));
  check_symmetric(m, op);
  if (with_vectors) out.eigenvectors = solver.eigenvectors();
  out.zero_tol = zero_tolerance(out.lambda_max());
  out.zero_multiplicity = static_cast<std::size_t>(
      (out.eigenvalues.array().abs() <= out.zero_tol).count());
  return out;
}

ShiftOperator ShiftOperator::create(const Matrix& m, GsoKind kind, bool with_vectors) {
  auto data = std::make_shared<Data>();
  data->spectrum = eigendecompose(m, with_vectors);
  data->matrix = 0.5 * (m + m.transpose());
  data->kind = kind;
  if (kind != GsoKind::custom && data->matrix.rows() > 0) {
    const double lmax = data->spectrum.lambda_max();
    const double lmin = data->spectrum.lambda_min();
    if (lmin < -1e-9 * std::max(lmax, 0.0) - std::numeric_limits<double>::min()) {
      std::ostringstream os;
      os << to_string(kind) << " operator is not positive semi-definite (lambda_min = " << lmin << ")";
      fail(ErrorKind::assumption, os.str());
    }
  }
  data->sparse = data->matrix.sparseView(0.0, 0.0);
  data->sparse.makeCompressed();
  return ShiftOperator(std::move(data));
}

Spectrum ShiftOperator::full_spectrum() const {
  if (data_->spectrum.has_vectors()) return data_->spectrum;
  return eigendecompose(data_->matrix, true);
}

Matrix permute_symmetric(const Matrix& s, const std::vector<std::size_t>& perm) {
  const auto n = s.rows();
  Matrix out(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      out(static_cast<Eigen::Index>(perm[static_cast<std::size_t>(i)]),
          static_cast<Eigen::Index>(perm[static_cast<std::size_t>(j)])) = s(i, j);
  return out;
}

Matrix permute_rows(const Matrix& x, const std::vector<std::size_t>& perm) {
  Matrix out(x.rows(), x.cols());
  for (Eigen::Index i = 0; i < x.rows(); ++i)
    out.row(static_cast<Eigen::Index>(perm[static_cast<std::size_t>(i)])) = x.row(i);
  return out;
}

}  // namespace hgsp
