#include <doctest.h>

#include <cmath>
#include <numeric>
#include <random>

#include "hgsp/spectral.hpp"

using namespace hgsp;

namespace {

ShiftOperator op(const Matrix& m) { return ShiftOperator::create(m, GsoKind::custom, true); }

Matrix diag(std::initializer_list<double> v) {
  Vector d(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) d(i++) = x;
  return d.asDiagonal();
}

}  // namespace

TEST_CASE("eigendecompose examples") {
  const Spectrum a = eigendecompose(Matrix::Identity(3, 3));
  CHECK(a.eigenvalues == Vector::Ones(3));
  Matrix m(2, 2);
  m << 1, 1, 1, 1;
  const Spectrum b = eigendecompose(m);
  CHECK(b.eigenvalues(0) == doctest::Approx(0.0));
  CHECK(b.eigenvalues(1) == doctest::Approx(2.0));
  CHECK(std::abs(b.eigenvectors.col(1).dot(Eigen::Vector2d(1, 1) / std::sqrt(2.0))) == doctest::Approx(1.0));
  CHECK(std::abs(b.eigenvectors.col(0).dot(Eigen::Vector2d(1, -1) / std::sqrt(2.0))) == doctest::Approx(1.0));
  CHECK(b.zero_multiplicity == 1);
  CHECK(eigendecompose(diag({3, 1, 2})).eigenvalues == Eigen::Vector3d(1, 2, 3));
  Matrix asym(2, 2);
  asym << 1, 2, 0, 1;
  CHECK_THROWS_AS(eigendecompose(asym), Error);
}

TEST_CASE("spectrum invariants on random symmetric input") {
  Rng rng(2);
  for (int t = 0; t < 10; ++t) {
    const Matrix s = random_psd(20, t % 3, 0.1, 3.0, rng);
    const Spectrum sp = eigendecompose(s);
    const double norm = sp.lambda_max();
    for (Eigen::Index i = 0; i < 20; ++i)
      CHECK((s * sp.eigenvectors.col(i) - sp.eigenvalues(i) * sp.eigenvectors.col(i)).norm() <= 1e-8 * norm);
    CHECK((sp.eigenvectors.transpose() * sp.eigenvectors - Matrix::Identity(20, 20)).cwiseAbs().maxCoeff() < 1e-8);
    CHECK(sp.zero_multiplicity == static_cast<std::size_t>(t % 3));
  }
}

TEST_CASE("spectral similarity examples") {
  Rng rng(3);
  const Matrix s = random_psd(8, 0, 0.5, 2.0, rng);
  CHECK(spectral_similarity(s, s).epsilon == doctest::Approx(0.0).epsilon(1e-12));
  const SimilarityReport d = spectral_similarity(s, 1.1 * s);
  CHECK(std::abs(d.epsilon - 0.1) < 1e-12);
  CHECK(d.certified);
  const SimilarityReport r = spectral_similarity(diag({1, 2}), diag({1.2, 1.8}));
  CHECK(r.epsilon == doctest::Approx(0.2));
  CHECK(r.mu_max == doctest::Approx(1.2));
  CHECK(r.mu_min == doctest::Approx(0.9));
  CHECK(r.kernels_match);
  CHECK_THROWS_AS(spectral_similarity(diag({1, 2}), diag({1, 2, 3})), Error);
  CHECK_THROWS_AS(spectral_similarity(diag({1, -2}), diag({1, 2})), Error);
}

TEST_CASE("kernel handling") {
  // ker(S) not inside ker(S~): no finite coefficient.
  const SimilarityReport a = spectral_similarity(diag({0, 1}), diag({1, 1}));
  CHECK(std::isinf(a.epsilon));
  CHECK_FALSE(a.certified);
  CHECK_FALSE(a.kernels_match);
  // S~ with a larger kernel: finite but equal to 1 (mu = 0 on range(S)).
  const SimilarityReport b = spectral_similarity(diag({1, 1}), diag({0, 1}));
  CHECK(b.epsilon == doctest::Approx(1.0));
  CHECK_FALSE(b.kernels_match);
  // Matching kernels.
  const SimilarityReport c = spectral_similarity(diag({0, 1, 2}), diag({0, 1.05, 2}));
  CHECK(c.epsilon == doctest::Approx(0.05));
  CHECK(c.kernels_match);
  CHECK(c.zero_mult_s == 1);
}

TEST_CASE("similarity is minimal and implies eigenvalue interlacing") {
  Rng rng(4);
  for (int t = 0; t < 30; ++t) {
    const Eigen::Index n = 4 + t % 10;
    const ShiftOperator s = op(random_psd(n, 0, 0.2, 2.0, rng));
    const Matrix e = random_symmetric(n, 0.05, rng);
    const Matrix st_m = s.matrix() + 0.5 * (s.matrix() * e + e * s.matrix());
    const SimilarityReport r = spectral_similarity(s.matrix(), st_m);
    REQUIRE(std::isfinite(r.epsilon));
    CHECK(r.certified);
    if (r.epsilon > 1e-6) CHECK_FALSE(sandwich_holds(s.matrix(), st_m, r.epsilon - 1e-6, 1e-12));
    const Vector lt = eigendecompose(st_m, false).eigenvalues;
    for (Eigen::Index i = 0; i < n; ++i) {
      const double l = s.eigenvalues()(i);
      CHECK(lt(i) >= (1 - r.epsilon) * l - 1e-9);
      CHECK(lt(i) <= (1 + r.epsilon) * l + 1e-9);
    }
  }
}

TEST_CASE("similarity is invariant under simultaneous permutation") {
  Rng rng(5);
  const Matrix s = random_psd(9, 0, 0.3, 2.0, rng);
  const Matrix e = random_symmetric(9, 0.1, rng);
  const Matrix st = s + 0.5 * (s * e + e * s);
  std::vector<std::size_t> perm(9);
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), rng);
  const double a = spectral_similarity(s, st).epsilon;
  const double b = spectral_similarity(permute_symmetric(s, perm), permute_symmetric(st, perm)).epsilon;
  CHECK(std::abs(a - b) < 1e-12);
}

TEST_CASE("alignment realigns a spectrum onto the first eigenbasis") {
  Rng rng(6);
  const ShiftOperator s = op(random_psd(6, 0, 0.5, 2.0, rng));
  const Matrix q = random_orthogonal(6, rng);
  const ShiftOperator st = op(q * (1.05 * s.matrix()) * q.transpose());
  const Matrix aligned = align_to_eigenbasis(s.spectrum(), st.spectrum());
  CHECK(spectral_similarity(s.matrix(), aligned).epsilon == doctest::Approx(0.05));
}

TEST_CASE("relative perturbation examples") {
  Rng rng(7);
  const ShiftOperator s = op(random_psd(6, 1, 0.5, 2.0, rng));
  const Perturbation p = perturb_relative(s, 0.1 * Matrix::Identity(6, 6));
  CHECK(p.s_tilde.isApprox(1.1 * s.matrix()));
  CHECK(p.bound == doctest::Approx(0.1));
  CHECK(p.commuting);
  CHECK(spectral_similarity(s.matrix(), p.s_tilde).epsilon == doctest::Approx(0.1));
  const Perturbation z = perturb_relative(s, Matrix::Zero(6, 6));
  CHECK(z.bound == 0.0);
  CHECK(spectral_similarity(s.matrix(), z.s_tilde).epsilon == doctest::Approx(0.0).epsilon(1e-12));
  CHECK_THROWS_AS(perturb_relative(s, -3.0 * Matrix::Identity(6, 6)), Error);
}

TEST_CASE("non-commuting relative perturbations can exceed delta") {
  // S = diag(1, 0.01), E = delta [[0,1],[1,0]]: the coefficient is about 5 delta,
  // so only the conservative bound delta sqrt(lmax / lbar) certifies it.
  const ShiftOperator s = op(diag({1.0, 0.01}));
  Matrix e(2, 2);
  e << 0, 0.01, 0.01, 0;
  const Perturbation p = perturb_relative(s, e);
  CHECK_FALSE(p.commuting);
  const double eps = spectral_similarity(s.matrix(), p.s_tilde).epsilon;
  CHECK(eps > 4 * 0.01);
  CHECK(eps <= p.bound + 1e-12);
  CHECK(p.bound == doctest::Approx(0.1));
}

TEST_CASE("random symmetric relative perturbation stays under its bound") {
  Rng rng(8);
  for (int t = 0; t < 50; ++t) {
    const ShiftOperator s = op(random_psd(8, 0, 0.2, 2.0, rng));
    const Perturbation p = perturb_relative(s, random_symmetric(8, 0.05, rng));
    CHECK(spectral_similarity(s.matrix(), p.s_tilde).epsilon <= p.bound + 1e-8);
  }
}

TEST_CASE("additive perturbation examples") {
  const ShiftOperator s = op(diag({1, 2}));
  const Perturbation p = perturb_additive(s, diag({0.1, -0.1}));
  CHECK(p.bound == doctest::Approx(0.1));
  CHECK(spectral_similarity(s.matrix(), p.s_tilde).epsilon == doctest::Approx(0.1));
  CHECK(perturb_additive(s, Matrix::Zero(2, 2)).bound == 0.0);
  Rng rng(9);
  const Matrix q = random_orthogonal(5, rng);
  const ShiftOperator h = op(q * diag({0.5, 0.8, 1.0, 1.5, 2.0}) * q.transpose());
  const Matrix d = random_additive(h.spectrum(), 0.05, rng);
  const Perturbation pa = perturb_additive(h, d);
  CHECK(pa.bound == doctest::Approx(0.1));
  CHECK(spectral_similarity(h.matrix(), pa.s_tilde).epsilon <= 0.1 + 1e-8);
  const ShiftOperator k = op(diag({0, 1}));
  CHECK_THROWS_WITH_AS(perturb_additive(k, diag({0.1, 0})), doctest::Contains("ker(D)"), Error);
}

TEST_CASE("combined perturbation examples") {
  Rng rng(10);
  const ShiftOperator s = op(random_psd(6, 0, 0.5, 2.0, rng));
  const Perturbation z = perturb_combined(s, Matrix::Zero(6, 6), Matrix::Zero(6, 6));
  CHECK(z.bound == 0.0);
  const Perturbation d = perturb_combined(s, 0.05 * Matrix::Identity(6, 6), Matrix::Zero(6, 6));
  CHECK(d.bound == doctest::Approx(0.05));
  CHECK(spectral_similarity(s.matrix(), d.s_tilde).epsilon == doctest::Approx(0.05));
  const Matrix q = random_orthogonal(6, rng);
  const ShiftOperator u = op(q * diag({1, 1.2, 1.4, 1.6, 1.8, 2}) * q.transpose());
  for (int t = 0; t < 100; ++t) {
    const Perturbation p = perturb_combined(u, random_commuting_relative(u.spectrum(), 0.02, rng),
                                            random_additive(u.spectrum(), 0.03, rng));
    CHECK(p.bound == doctest::Approx(0.05));
    CHECK(spectral_similarity(u.matrix(), p.s_tilde).epsilon <= 0.05 + 1e-8);
  }
}

TEST_CASE("generated perturbations respect their bounds across kernels") {
  Rng rng(12);
  for (int t = 0; t < 200; ++t) {
    const Eigen::Index n = 2 + t % 31;
    const ShiftOperator s = op(random_psd(n, t % 3 == 0 ? 1 : 0, 0.1, 2.0, rng));
    const double lbar = s.spectrum().smallest_nonzero();
    const Perturbation r = perturb_relative(s, random_commuting_relative(s.spectrum(), 0.1, rng));
    const Perturbation a = perturb_additive(s, random_additive(s.spectrum(), 0.05 * lbar, rng));
    const Perturbation c = perturb_combined(s, random_commuting_relative(s.spectrum(), 0.05, rng),
                                            random_additive(s.spectrum(), 0.05 * lbar, rng));
    for (const Perturbation* p : {&r, &a, &c})
      CHECK(spectral_similarity(s.matrix(), p->s_tilde).epsilon <= p->bound + 1e-8);
  }
}
