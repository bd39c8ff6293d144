#include <doctest.h>

#include <cmath>
#include <numbers>

#include "hgsp/randgraph.hpp"

using namespace hgsp;

TEST_CASE("erdos renyi extremes") {
  const WeightedGraph full = gen_er(12, 1.0, 1);
  CHECK(full.num_edges() == 66);
  CHECK(full.adjacency.diagonal().norm() == 0.0);
  CHECK(gen_er(12, 0.0, 1).num_edges() == 0);
  CHECK_THROWS_AS(gen_er(12, 1.5, 1), Error);
  CHECK(gen_er(30, 0.3, 4).adjacency == gen_er(30, 0.3, 4).adjacency);
}

TEST_CASE("erdos renyi edge count is binomial") {
  // 40 nodes: 780 pairs; mean 234, sd about 12.8.
  double total = 0.0;
  for (std::uint64_t s = 0; s < 50; ++s) total += static_cast<double>(gen_er(40, 0.3, s).num_edges());
  CHECK(std::abs(total / 50 - 234.0) < 6.0);
}

TEST_CASE("constant graphon matches erdos renyi density") {
  double total = 0.0;
  for (std::uint64_t s = 0; s < 20; ++s)
    total += static_cast<double>(gen_graphon(40, [](double, double) { return 0.4; }, s).num_edges());
  CHECK(std::abs(total / 20 / 780.0 - 0.4) < 0.02);
  CHECK_THROWS_AS(gen_graphon(10, [](double, double) { return 1.2; }, 0), Error);
}

TEST_CASE("chung lu degrees follow the expected trend") {
  std::vector<double> w(200);
  for (std::size_t i = 0; i < w.size(); ++i) w[i] = 5.0 + 25.0 * static_cast<double>(i) / 199.0;
  Vector deg = Vector::Zero(200);
  for (std::uint64_t s = 0; s < 20; ++s) deg += gen_chung_lu(w, s).degrees();
  deg /= 20.0;
  CHECK(deg.head(20).mean() < deg.tail(20).mean());
  CHECK(std::abs(deg.mean() - 17.5) < 1.5);
  CHECK_THROWS_AS(gen_chung_lu({1.0, 100.0}, 0), Error);
  CHECK_THROWS_AS(gen_chung_lu({1.0, -1.0, 1.0}, 0), Error);
}

TEST_CASE("sample_connected retries and gives up") {
  const WeightedGraph g = sample_connected([](std::uint64_t s) { return gen_er(30, 0.3, s); }, 3);
  CHECK(g.component_count() == 1);
  CHECK_THROWS_AS(sample_connected([](std::uint64_t s) { return gen_er(30, 0.0, s); }, 3, 5), Error);
}

TEST_CASE("semicircle law examples") {
  CHECK(semicircle_density(0.0) == doctest::Approx(2.0 / std::numbers::pi));
  CHECK(semicircle_density(1.5) == 0.0);
  CHECK(semicircle_cdf(-1.0) == doctest::Approx(0.0));
  CHECK(semicircle_cdf(0.0) == doctest::Approx(0.5));
  CHECK(semicircle_cdf(1.0) == doctest::Approx(1.0));
  CHECK(semicircle_cdf(2.0) == 1.0);
  // Derivative of the CDF is the density.
  const double h = 1e-6;
  CHECK((semicircle_cdf(0.3 + h) - semicircle_cdf(0.3 - h)) / (2 * h) == doctest::Approx(semicircle_density(0.3)));
}

TEST_CASE("identity esd is far from the semicircle") {
  const EsdSample e = esd(ShiftOperator::create(Matrix::Identity(5, 5), GsoKind::custom));
  CHECK(e.eigenvalues == std::vector<double>(5, 1.0));
  CHECK(semicircle_distance(e) == doctest::Approx(1.0));
}

TEST_CASE("dense erdos renyi esd approaches the semicircle") {
  const WeightedGraph g = sample_connected([](std::uint64_t s) { return gen_er(600, 0.5, s); }, 8);
  const EsdSample e = laplacian_deviation_esd(g);
  CHECK(e.n == 600);
  CHECK(semicircle_distance(e) < 0.08);
}

TEST_CASE("pair similarity examples") {
  const WeightedGraph g = sample_connected([](std::uint64_t s) { return gen_er(30, 0.5, s); }, 1);
  CHECK(pair_similarity(g, g) == doctest::Approx(0.0).epsilon(1e-10));
  const WeightedGraph h = sample_connected([](std::uint64_t s) { return gen_er(30, 0.5, s); }, 2);
  const double e = pair_similarity(g, h);
  CHECK(e > 0.0);
  CHECK(std::isfinite(e));
}

TEST_CASE("random model names") {
  for (RandomModel m : {RandomModel::er, RandomModel::chung_lu, RandomModel::graphon})
    CHECK(parse_random_model(to_string(m)) == m);
  CHECK_THROWS_AS(parse_random_model("ba"), Error);
}

TEST_CASE("similarity decays with size on a small grid") {
  RandomModelSpec spec;
  spec.p = 0.5;
  const SimilarityDecayStudy s = similarity_decay(spec, {32, 64, 128}, 6, 17);
  REQUIRE(s.sizes.size() == 3);
  CHECK(s.rows.size() == 18);
  CHECK(s.sizes[0].mean > s.sizes[1].mean);
  CHECK(s.sizes[1].mean > s.sizes[2].mean);
  CHECK(s.slope < 0.0);
  CHECK(s.slope_ci_low <= s.slope);
  CHECK(s.slope <= s.slope_ci_high);
  const SimilarityDecayStudy again = similarity_decay(spec, {32, 64, 128}, 6, 17);
  CHECK(again.slope == s.slope);
}
