#pragma once

#include <limits>
#include <vector>

#include "hgsp/common.hpp"
#include "hgsp/shift_operator.hpp"

namespace hgsp {

/// Result of comparing two PSD operators in the Loewner order.
///
/// `epsilon` is the smallest value with (1-eps) S <= S~ <= (1+eps) S. It is
/// computed from the generalized eigenvalues mu of the pencil (S~, S) on
/// range(S): eps = max(mu_max - 1, 1 - mu_min). It is +inf when ker(S) is not
/// contained in ker(S~), since then no finite eps satisfies the upper bound.
struct SimilarityReport {
  double epsilon = std::numeric_limits<double>::infinity();
  double mu_max = std::numeric_limits<double>::quiet_NaN();
  double mu_min = std::numeric_limits<double>::quiet_NaN();
  std::size_t zero_mult_s = 0;
  std::size_t zero_mult_s_tilde = 0;
  bool kernels_match = false;
  /// Whether (1+eps+tol)S - S~ and S~ - (1-eps-tol)S are both PSD to tolerance.
  bool certified = false;
  /// lambda_i(S~) / lambda_i(S) over the nonzero eigenvalues of S, ascending order.
  std::vector<double> per_eigen_ratios;
};

SimilarityReport spectral_similarity(const ShiftOperator& s, const ShiftOperator& s_tilde);
SimilarityReport spectral_similarity(const Matrix& s, const Matrix& s_tilde);

/// Whether both sandwich matrices (1+eps)S - S~ and S~ - (1-eps)S have no
/// eigenvalue below -tol * max(1, ||S||_op). Used for certification and for the
/// minimality property check.
bool sandwich_holds(const Matrix& s, const Matrix& s_tilde, double eps, double tol);

/// S~ realigned onto the eigenbasis of S: V_S diag(lambda(S~)) V_S^T. The
/// coefficient of (S, aligned) is the smallest coefficient achievable over
/// all orthogonal relabelings U S~ U^T, i.e. the eigenvalue-wise coefficient
/// max_i |lambda_i(S~)/lambda_i(S) - 1|.
Matrix align_to_eigenbasis(const Spectrum& s, const Spectrum& s_tilde);

enum class PerturbationKind { relative, additive, combined };

/// A perturbed operator together with the similarity coefficient that the
/// perturbation size certifies.
struct Perturbation {
  PerturbationKind kind = PerturbationKind::relative;
  Matrix relative;  // E
  Matrix additive;  // D
  double delta_r = 0.0;  // ||E||_op
  double delta_a = 0.0;  // ||D||_op
  /// True when E commutes with S; the tight bound delta_r applies only then.
  bool commuting = true;
  Matrix s_tilde;
  double bound = 0.0;
};

/// S~ = S + (SE + ES)/2. Certified coefficient: ||E|| when E commutes with S;
/// otherwise ||E|| sqrt(lambda_max / lambda_bar) provided E maps ker(S) into
/// ker(S) (else +inf). Throws `assumption` if S~ is not PSD.
Perturbation perturb_relative(const ShiftOperator& s, const Matrix& e);

/// S~ = S + D with ker(S) contained in ker(D). Certified coefficient
/// ||D|| / lambda_bar(S).
Perturbation perturb_additive(const ShiftOperator& s, const Matrix& d);

/// S~ = S + (SE + ES)/2 + D; bound is the sum of the two bounds above.
Perturbation perturb_combined(const ShiftOperator& s, const Matrix& e, const Matrix& d);

// Random instance generators. All take an explicit RNG.

/// Q diag(lambda) Q^T with Haar-random Q, `kernel_dim` zero eigenvalues and the
/// rest uniform in [lo, hi].
Matrix random_psd(Eigen::Index n, Eigen::Index kernel_dim, double lo, double hi, Rng& rng);
/// Gaussian symmetric matrix rescaled to operator norm `norm`.
Matrix random_symmetric(Eigen::Index n, double norm, Rng& rng);
/// Relative perturbation diagonal in S's eigenbasis with ||E||_op = delta.
Matrix random_commuting_relative(const Spectrum& s, double delta, Rng& rng);
/// Gaussian symmetric matrix projected onto range(S) on both sides and rescaled
/// to operator norm `delta`, so ker(S) is contained in ker(D).
Matrix random_additive(const Spectrum& s, double delta, Rng& rng);
/// Haar-random orthogonal matrix.
Matrix random_orthogonal(Eigen::Index n, Rng& rng);

}  // namespace hgsp
