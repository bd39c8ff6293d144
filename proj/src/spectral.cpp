#include "hgsp/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace hgsp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_psd(const Spectrum& sp, const char* which) {
  if (sp.eigenvalues.size() == 0) return;
  if (sp.lambda_min() < -1e-9 * std::max(sp.lambda_max(), 0.0) - std::numeric_limits<double>::min()) {
    std::ostringstream os;
    os << "spectral_similarity: " << which << " is not positive semi-definite (lambda_min = "
       << sp.lambda_min() << ")";
    fail(ErrorKind::invalid_argument, os.str());
  }
}

// Columns of the eigenvector matrix split into kernel / range parts.
struct SplitBasis {
  Matrix kernel;
  Matrix range;
  Vector range_values;
};

SplitBasis split_basis(const Spectrum& sp) {
  std::vector<Eigen::Index> ker, rng;
  for (Eigen::Index i = 0; i < sp.eigenvalues.size(); ++i)
    (std::abs(sp.eigenvalues(i)) <= sp.zero_tol ? ker : rng).push_back(i);
  SplitBasis out;
  const auto n = sp.eigenvectors.rows();
  out.kernel.resize(n, static_cast<Eigen::Index>(ker.size()));
  out.range.resize(n, static_cast<Eigen::Index>(rng.size()));
  out.range_values.resize(static_cast<Eigen::Index>(rng.size()));
  for (std::size_t c = 0; c < ker.size(); ++c) out.kernel.col(static_cast<Eigen::Index>(c)) = sp.eigenvectors.col(ker[c]);
  for (std::size_t c = 0; c < rng.size(); ++c) {
    out.range.col(static_cast<Eigen::Index>(c)) = sp.eigenvectors.col(rng[c]);
    out.range_values(static_cast<Eigen::Index>(c)) = sp.eigenvalues(rng[c]);
  }
  return out;
}

double spectral_norm(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<Matrix> svd(m);
  return svd.singularValues()(0);
}

SimilarityReport similarity_from_spectra(const Matrix& s, const Spectrum& sp, const Matrix& s_tilde,
                                         const Spectrum& sp_tilde) {
  if (s.rows() != s_tilde.rows()) fail(ErrorKind::invalid_argument, "spectral_similarity: size mismatch");
  require_psd(sp, "S");
  require_psd(sp_tilde, "S~");

  SimilarityReport r;
  r.zero_mult_s = sp.zero_multiplicity;
  r.zero_mult_s_tilde = sp_tilde.zero_multiplicity;
  for (Eigen::Index i = 0; i < sp.eigenvalues.size(); ++i)
    if (std::abs(sp.eigenvalues(i)) > sp.zero_tol)
      r.per_eigen_ratios.push_back(sp_tilde.eigenvalues(i) / sp.eigenvalues(i));

  const SplitBasis basis = split_basis(sp);
  bool contained = true;
  if (basis.kernel.cols() > 0) {
    const Matrix q = basis.kernel.transpose() * s_tilde * basis.kernel;
    const double leak = q.cols() > 0 ? operator_norm_symmetric(0.5 * (q + q.transpose())) : 0.0;
    contained = leak <= 1e-8 * std::max(1.0, sp_tilde.lambda_max());
  }
  r.kernels_match = contained && r.zero_mult_s == r.zero_mult_s_tilde;
  if (!contained) return r;

  if (basis.range.cols() == 0) {
    // S = 0 and S~ vanishes on everything: identical operators.
    r.epsilon = 0.0;
    r.mu_max = r.mu_min = 1.0;
    r.certified = true;
    return r;
  }
  const Vector scale = basis.range_values.cwiseSqrt().cwiseInverse();
  Matrix pencil = scale.asDiagonal() * (basis.range.transpose() * s_tilde * basis.range) * scale.asDiagonal();
  pencil = 0.5 * (pencil + pencil.transpose());
  Eigen::SelfAdjointEigenSolver<Matrix> solver(pencil, Eigen::EigenvaluesOnly);
  r.mu_min = solver.eigenvalues()(0);
  r.mu_max = solver.eigenvalues()(solver.eigenvalues().size() - 1);
  r.epsilon = std::max({r.mu_max - 1.0, 1.0 - r.mu_min, 0.0});
  r.certified = sandwich_holds(s, s_tilde, r.epsilon, 1e-9);
  return r;
}

}  // namespace

bool sandwich_holds(const Matrix& s, const Matrix& s_tilde, double eps, double tol) {
  if (!std::isfinite(eps)) return false;
  const double scale = std::max(1.0, operator_norm_symmetric(s));
  const Matrix upper = (1.0 + eps) * s - s_tilde;
  const Matrix lower = s_tilde - (1.0 - eps) * s;
  Eigen::SelfAdjointEigenSolver<Matrix> su(0.5 * (upper + upper.transpose()), Eigen::EigenvaluesOnly);
  Eigen::SelfAdjointEigenSolver<Matrix> sl(0.5 * (lower + lower.transpose()), Eigen::EigenvaluesOnly);
  return su.eigenvalues()(0) >= -tol * scale && sl.eigenvalues()(0) >= -tol * scale;
}

SimilarityReport spectral_similarity(const Matrix& s, const Matrix& s_tilde) {
  if (s.rows() != s_tilde.rows() || s.cols() != s_tilde.cols())
    fail(ErrorKind::invalid_argument, "spectral_similarity: size mismatch");
  return similarity_from_spectra(s, eigendecompose(s, true), s_tilde, eigendecompose(s_tilde, false));
}

SimilarityReport spectral_similarity(const ShiftOperator& s, const ShiftOperator& s_tilde) {
  if (s.size() != s_tilde.size()) fail(ErrorKind::invalid_argument, "spectral_similarity: size mismatch");
  return similarity_from_spectra(s.matrix(), s.full_spectrum(), s_tilde.matrix(), s_tilde.spectrum());
}

Matrix align_to_eigenbasis(const Spectrum& s, const Spectrum& s_tilde) {
  if (!s.has_vectors()) fail(ErrorKind::invalid_argument, "align_to_eigenbasis: eigenvectors required");
  if (s.eigenvalues.size() != s_tilde.eigenvalues.size())
    fail(ErrorKind::invalid_argument, "align_to_eigenbasis: size mismatch");
  return s.eigenvectors * s_tilde.eigenvalues.asDiagonal() * s.eigenvectors.transpose();
}

namespace {

void require_perturbed_psd(const Matrix& s_tilde) {
  const Spectrum sp = eigendecompose(s_tilde, false);
  if (sp.eigenvalues.size() > 0 &&
      sp.lambda_min() < -1e-9 * std::max(sp.lambda_max(), 0.0) - std::numeric_limits<double>::min()) {
    std::ostringstream os;
    os << "perturbed operator is not positive semi-definite (lambda_min = " << sp.lambda_min()
       << "); use a smaller perturbation size";
    fail(ErrorKind::assumption, os.str());
  }
}

void require_same_shape(const ShiftOperator& s, const Matrix& m, const char* what) {
  if (m.rows() != s.size() || m.cols() != s.size())
    fail(ErrorKind::invalid_argument, std::string(what) + ": perturbation size mismatch");
  if ((m - m.transpose()).norm() > 1e-10 * std::max(1.0, m.norm()))
    fail(ErrorKind::invalid_argument, std::string(what) + ": perturbation must be symmetric");
}

// Relative part: returns the certified coefficient.
double relative_bound(const Spectrum& sp, const SplitBasis& basis, const Matrix& s, const Matrix& e,
                      double delta, bool& commuting) {
  const Matrix comm = s * e - e * s;
  commuting = comm.norm() <= 1e-9 * std::max(1.0, s.norm()) * std::max(1.0, e.norm());
  if (commuting) return delta;
  if (basis.kernel.cols() > 0 && spectral_norm(s * e * basis.kernel) > 1e-9 * std::max(1.0, s.norm()) * std::max(1.0, e.norm()))
    return kInf;
  return delta * std::sqrt(sp.lambda_max() / sp.smallest_nonzero());
}

double additive_bound(const Spectrum& sp, const SplitBasis& basis, const Matrix& d, double delta) {
  if (basis.kernel.cols() > 0 && spectral_norm(d * basis.kernel) > 1e-9 * std::max(1.0, d.norm()))
    fail(ErrorKind::assumption, "ker(D) ⊄ ker(S): the additive perturbation must vanish on the kernel of S");
  if (delta == 0.0) return 0.0;
  return delta / sp.smallest_nonzero();
}

}  // namespace

Perturbation perturb_relative(const ShiftOperator& s, const Matrix& e) {
  require_same_shape(s, e, "perturb_relative");
  const Spectrum sp = s.full_spectrum();
  const SplitBasis basis = split_basis(sp);
  Perturbation p;
  p.kind = PerturbationKind::relative;
  p.relative = e;
  p.additive = Matrix::Zero(s.size(), s.size());
  p.delta_r = operator_norm_symmetric(0.5 * (e + e.transpose()));
  p.s_tilde = s.matrix() + 0.5 * (s.matrix() * e + e * s.matrix());
  p.s_tilde = 0.5 * (p.s_tilde + p.s_tilde.transpose());
  require_perturbed_psd(p.s_tilde);
  p.bound = relative_bound(sp, basis, s.matrix(), e, p.delta_r, p.commuting);
  return p;
}

Perturbation perturb_additive(const ShiftOperator& s, const Matrix& d) {
  require_same_shape(s, d, "perturb_additive");
  const Spectrum sp = s.full_spectrum();
  const SplitBasis basis = split_basis(sp);
  Perturbation p;
  p.kind = PerturbationKind::additive;
  p.relative = Matrix::Zero(s.size(), s.size());
  p.additive = d;
  p.delta_a = operator_norm_symmetric(0.5 * (d + d.transpose()));
  p.bound = additive_bound(sp, basis, d, p.delta_a);
  p.s_tilde = s.matrix() + 0.5 * (d + d.transpose());
  require_perturbed_psd(p.s_tilde);
  return p;
}

Perturbation perturb_combined(const ShiftOperator& s, const Matrix& e, const Matrix& d) {
  require_same_shape(s, e, "perturb_combined");
  require_same_shape(s, d, "perturb_combined");
  const Spectrum sp = s.full_spectrum();
  const SplitBasis basis = split_basis(sp);
  Perturbation p;
  p.kind = PerturbationKind::combined;
  p.relative = e;
  p.additive = d;
  p.delta_r = operator_norm_symmetric(0.5 * (e + e.transpose()));
  p.delta_a = operator_norm_symmetric(0.5 * (d + d.transpose()));
  const double add = additive_bound(sp, basis, d, p.delta_a);
  const double rel = relative_bound(sp, basis, s.matrix(), e, p.delta_r, p.commuting);
  p.bound = rel + add;
  p.s_tilde = s.matrix() + 0.5 * (s.matrix() * e + e * s.matrix()) + 0.5 * (d + d.transpose());
  p.s_tilde = 0.5 * (p.s_tilde + p.s_tilde.transpose());
  require_perturbed_psd(p.s_tilde);
  return p;
}

Matrix random_orthogonal(Eigen::Index n, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix g(n, n);
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index i = 0; i < n; ++i) g(i, j) = normal(rng);
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ();
  const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index j = 0; j < n; ++j)
    if (r(j, j) < 0) q.col(j) = -q.col(j);
  return q;
}

Matrix random_psd(Eigen::Index n, Eigen::Index kernel_dim, double lo, double hi, Rng& rng) {
  if (kernel_dim < 0 || kernel_dim > n || lo < 0 || hi < lo)
    fail(ErrorKind::invalid_argument, "random_psd: bad parameters");
  std::uniform_real_distribution<double> uni(lo, hi);
  Vector lambda(n);
  for (Eigen::Index i = 0; i < n; ++i) lambda(i) = i < kernel_dim ? 0.0 : uni(rng);
  const Matrix q = random_orthogonal(n, rng);
  Matrix s = q * lambda.asDiagonal() * q.transpose();
  return 0.5 * (s + s.transpose());
}

Matrix random_symmetric(Eigen::Index n, double norm, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix g(n, n);
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index i = 0; i <= j; ++i) g(i, j) = g(j, i) = normal(rng);
  const double op = operator_norm_symmetric(g);
  return op > 0 ? Matrix(g * (norm / op)) : g;
}

Matrix random_commuting_relative(const Spectrum& s, double delta, Rng& rng) {
  if (!s.has_vectors()) fail(ErrorKind::invalid_argument, "random_commuting_relative: eigenvectors required");
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  Vector mu(s.eigenvalues.size());
  for (Eigen::Index i = 0; i < mu.size(); ++i) mu(i) = uni(rng);
  const double top = mu.cwiseAbs().maxCoeff();
  if (top > 0) mu *= delta / top;
  Matrix e = s.eigenvectors * mu.asDiagonal() * s.eigenvectors.transpose();
  return 0.5 * (e + e.transpose());
}

Matrix random_additive(const Spectrum& s, double delta, Rng& rng) {
  if (!s.has_vectors()) fail(ErrorKind::invalid_argument, "random_additive: eigenvectors required");
  const SplitBasis basis = split_basis(s);
  const Eigen::Index n = s.eigenvalues.size();
  if (basis.range.cols() == 0) return Matrix::Zero(n, n);
  const Matrix g = random_symmetric(n, 1.0, rng);
  const Matrix proj = basis.range * basis.range.transpose();
  Matrix d = proj * g * proj;
  d = 0.5 * (d + d.transpose());
  const double op = operator_norm_symmetric(d);
  return op > 0 ? Matrix(d * (delta / op)) : d;
}

}  // namespace hgsp
