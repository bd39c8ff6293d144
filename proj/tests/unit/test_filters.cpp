#include <doctest.h>

#include <cmath>
#include <numeric>
#include <random>

#include "hgsp/filters.hpp"
#include "hgsp/spectral.hpp"

using namespace hgsp;

namespace {

ShiftOperator op(const Matrix& m) { return ShiftOperator::create(m, GsoKind::custom, true); }

Matrix path2() {
  Matrix s(2, 2);
  s << 1, 1, 1, 1;
  return s;
}

}  // namespace

TEST_CASE("apply examples") {
  const ShiftOperator s = op(path2());
  CHECK(apply(GraphFilter{{0, 0, 1}}, s, Eigen::Vector2d(1, 0)).isApprox(Eigen::Vector2d(2, 2)));
  CHECK(apply(GraphFilter{{3}}, s, Eigen::Vector2d(1, -2)).isApprox(Eigen::Vector2d(3, -6)));
  CHECK(apply(GraphFilter{{0, 1}}, s, Eigen::Vector2d(1, -1)).norm() == doctest::Approx(0.0));
  CHECK(apply(GraphFilter{{}}, s, Eigen::Vector2d(1, 1)).norm() == 0.0);
  CHECK_THROWS_AS(apply(GraphFilter{{1, 1}}, s, Eigen::Vector3d(1, 1, 1)), Error);
}

TEST_CASE("frequency response examples") {
  const GraphFilter f{{1, 2, 3}};
  CHECK(frequency_response(f, 2.0) == doctest::Approx(17.0));
  CHECK(frequency_response(f, 0.0) == doctest::Approx(1.0));
  CHECK(lambda_derivative(f, 2.0) == doctest::Approx(2.0 * (2 + 6 * 2.0)));
  CHECK(lambda_derivative(f, 0.0) == 0.0);
}

TEST_CASE("integral Lipschitz examples") {
  const IntegralLipschitz a = integral_lipschitz_constant(GraphFilter{{5}}, 0, 2);
  CHECK(a.value() == 0.0);
  const IntegralLipschitz b = integral_lipschitz_constant(GraphFilter{{0, 1}}, 0, 2);
  CHECK(b.endpoint == doctest::Approx(2.0));
  CHECK(b.value() == doctest::Approx(2.0));
  // 1 - lambda^2 has lambda h' = -2 lambda^2, largest at the endpoint.
  const IntegralLipschitz c = integral_lipschitz_constant(GraphFilter{{1, 0, -1}}, 0, 1.5);
  CHECK(c.value() == doctest::Approx(4.5));
  // An interior extremum shows up on the grid but not at the endpoints:
  // lambda h' = 2 lambda^2 - 3 lambda^3 peaks at 4/9 on [0, 1], endpoints give 1.
  const IntegralLipschitz d = integral_lipschitz_constant(GraphFilter{{0, 0, 1, -1}}, 0, 1);
  CHECK(d.endpoint == doctest::Approx(1.0));
  CHECK(d.value() >= d.endpoint);
}

TEST_CASE("normalize examples") {
  const ShiftOperator s = op(Eigen::Vector3d(0, 1, 2).asDiagonal().toDenseMatrix());
  const GraphFilter f = normalize(GraphFilter{{1, 1}}, s);
  CHECK(max_response(f, s.eigenvalues()) == doctest::Approx(1.0));
  CHECK(f.coeffs[0] == doctest::Approx(1.0 / 3.0));
  const GraphFilter g{{0.25, 0.1}};
  CHECK(normalize(g, s).coeffs == g.coeffs);
  const GraphFilter z = normalize(GraphFilter{{0, 0}}, s);
  CHECK(z.is_zero());
}

TEST_CASE("filters are linear in the signal") {
  Rng rng(1);
  const ShiftOperator s = op(random_psd(12, 1, 0.1, 2, rng));
  const GraphFilter f{{0.3, -1.2, 0.5, 0.1}};
  const Vector x = Vector::Random(12), y = Vector::Random(12);
  const Vector lhs = apply(f, s, 2.0 * x - 0.5 * y);
  const Vector rhs = 2.0 * apply(f, s, x) - 0.5 * apply(f, s, y);
  CHECK((lhs - rhs).norm() < 1e-12);
}

TEST_CASE("spectral mapping on eigenvectors") {
  Rng rng(2);
  const ShiftOperator s = op(random_psd(10, 0, 0.1, 2, rng));
  const GraphFilter f{{1, -0.5, 0.25}};
  const Spectrum sp = s.full_spectrum();
  for (Eigen::Index i = 0; i < 10; ++i) {
    const Vector v = sp.eigenvectors.col(i);
    CHECK((apply(f, s, v) - frequency_response(f, sp.eigenvalues(i)) * v).norm() < 1e-10);
  }
  CHECK((filter_matrix(f, s.matrix()) - (Matrix::Identity(10, 10) - 0.5 * s.matrix() +
                                          0.25 * s.matrix() * s.matrix()))
            .norm() < 1e-12);
}

TEST_CASE("filters are permutation equivariant") {
  Rng rng(3);
  const Matrix m = random_psd(9, 0, 0.1, 2, rng);
  std::vector<std::size_t> perm(9);
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), rng);
  const GraphFilter f{{0.2, 0.7, -0.3}};
  const Vector x = Vector::Random(9);
  const Vector a = permute_rows(apply(f, op(m), x), perm);
  const Vector b = apply(f, op(permute_symmetric(m, perm)), permute_rows(x, perm));
  CHECK((a - b).norm() < 1e-12);
}

TEST_CASE("prop1 examples") {
  Rng rng(4);
  const ShiftOperator s = op(random_psd(8, 0, 0.5, 2, rng));
  const ShiftOperator same = op(s.matrix());
  const Prop1Report z = check_prop1_bound(GraphFilter{{1, 2, 3}}, s, same, 0.0);
  CHECK(z.difference < 1e-12);
  CHECK(z.holds);
  // One-tap filter on (1+eps)S: difference is exactly |h_1| eps ||S||, equal to C eps.
  const ShiftOperator scaled = op(1.01 * s.matrix());
  const Prop1Report one = check_prop1_bound(GraphFilter{{0.5, 1.0}}, s, scaled, 0.01);
  CHECK(one.one_tap);
  CHECK(one.holds);
  CHECK(one.difference == doctest::Approx(0.01 * s.spectrum().lambda_max()));
  CHECK(one.difference <= one.bound + 1e-8);
}

TEST_CASE("prop1 holds for random normalized filters") {
  Rng rng(5);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int t = 0; t < 100; ++t) {
    const ShiftOperator s = op(random_psd(10, 0, 0.2, 2, rng));
    const ShiftOperator st = op(perturb_relative(s, random_commuting_relative(s.full_spectrum(), 0.01, rng)).s_tilde);
    const double eps = spectral_similarity(s, st).epsilon;
    GraphFilter f;
    for (int k = 0; k < 4; ++k) f.coeffs.push_back(u(rng));
    f = normalize(f, {&s.eigenvalues(), &st.eigenvalues()});
    const Prop1Report r = check_prop1_bound(f, s, st, eps);
    CHECK(r.holds);
  }
}
