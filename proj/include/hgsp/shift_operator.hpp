#pragma once

#include <memory>
#include <string>
#include <string_view>

#include "hgsp/common.hpp"

namespace hgsp {

enum class GsoKind {
  clique_henn,
  line_henn,
  hgnn,
  hgnn_plus,
  normalized_laplacian,
  adjacency_normalized,
  custom,
};

std::string to_string(GsoKind kind);
GsoKind parse_gso_kind(std::string_view name);

/// Eigendecomposition of a symmetric operator, eigenvalues ascending.
struct Spectrum {
  Vector eigenvalues;
  Matrix eigenvectors;  // columns; empty when only eigenvalues were requested
  std::size_t zero_multiplicity = 0;
  double zero_tol = 0.0;

  bool has_vectors() const { return eigenvectors.size() > 0; }
  double lambda_min() const { return eigenvalues(0); }
  double lambda_max() const { return eigenvalues(eigenvalues.size() - 1); }
  /// Smallest eigenvalue above the zero tolerance; +inf for the zero operator.
  double smallest_nonzero() const;
};

/// Kernel-detection threshold: |lambda| <= 1e-9 * max(1, lambda_max).
double zero_tolerance(double lambda_max);

/// Eigendecomposition of a dense symmetric matrix; rejects matrices whose
/// antisymmetric part exceeds 1e-10 * ||m||_op.
Spectrum eigendecompose(const Matrix& m, bool with_vectors = true);

/// Symmetric matrix used as a graph shift operator. Construction validates
/// symmetry and (for every kind except `custom`) positive semi-definiteness,
/// and caches the eigenvalues. Immutable afterwards.
class ShiftOperator {
 public:
  static ShiftOperator create(const Matrix& m, GsoKind kind, bool with_vectors = false);

  const Matrix& matrix() const { return data_->matrix; }
  const SparseMatrix& sparse() const { return data_->sparse; }
  GsoKind kind() const { return data_->kind; }
  Eigen::Index size() const { return data_->matrix.rows(); }
  const Spectrum& spectrum() const { return data_->spectrum; }
  const Vector& eigenvalues() const { return data_->spectrum.eigenvalues; }

  /// Spectrum including eigenvectors; reuses the cache when it has them.
  Spectrum full_spectrum() const;

 private:
  struct Data {
    Matrix matrix;
    SparseMatrix sparse;
    GsoKind kind = GsoKind::custom;
    Spectrum spectrum;
  };
  explicit ShiftOperator(std::shared_ptr<const Data> data) : data_(std::move(data)) {}
  std::shared_ptr<const Data> data_;
};

/// P S P^T for the node relabeling i -> perm[i].
Matrix permute_symmetric(const Matrix& s, const std::vector<std::size_t>& perm);
/// Rows relabeled i -> perm[i].
Matrix permute_rows(const Matrix& x, const std::vector<std::size_t>& perm);

}  // namespace hgsp
