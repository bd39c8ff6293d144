#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <random>

#include "hgsp/hypergraph.hpp"

using namespace hgsp;

namespace {

// Seven nodes v1..v7 (0..6): e1 = {v1,v2,v3,v4}, e2 = {v4,v6,v7}, e3 = {v4,v5}.
Hypergraph figure_one() { return Hypergraph(7, {{0, 1, 2, 3}, {3, 5, 6}, {3, 4}}); }

Hypergraph random_hypergraph(std::size_t n, std::size_t m, Rng& rng, bool weighted) {
  std::uniform_int_distribution<std::size_t> size(2, std::min<std::size_t>(n, 4));
  std::uniform_real_distribution<double> w(0.5, 2.0);
  std::vector<NodeSet> edges;
  std::vector<double> weights;
  std::vector<std::size_t> nodes(n);
  std::iota(nodes.begin(), nodes.end(), 0);
  for (std::size_t j = 0; j < m; ++j) {
    std::shuffle(nodes.begin(), nodes.end(), rng);
    edges.emplace_back(nodes.begin(), nodes.begin() + static_cast<std::ptrdiff_t>(size(rng)));
    weights.push_back(weighted ? w(rng) : 1.0);
  }
  // Cover every node with a final hyperedge chain.
  for (std::size_t i = 0; i + 1 < n; i += 2) {
    edges.push_back({i, i + 1});
    weights.push_back(weighted ? w(rng) : 1.0);
  }
  if (n % 2 == 1) {
    edges.push_back({0, n - 1});
    weights.push_back(weighted ? w(rng) : 1.0);
  }
  return Hypergraph(n, edges, weights);
}

std::vector<std::size_t> random_perm(std::size_t n, Rng& rng) {
  std::vector<std::size_t> p(n);
  std::iota(p.begin(), p.end(), 0);
  std::shuffle(p.begin(), p.end(), rng);
  return p;
}

}  // namespace

TEST_CASE("construction enforces the invariants") {
  CHECK_THROWS_WITH_AS(Hypergraph(3, {{0, 1}}), doctest::Contains("node 2"), Error);
  CHECK_THROWS_AS(Hypergraph(3, {{0, 0, 1, 2}}), Error);
  CHECK_THROWS_AS(Hypergraph(3, {{0, 1, 3}, {2, 0}}), Error);
  CHECK_THROWS_AS(Hypergraph(2, {{0}}), Error);
  CHECK_THROWS_AS(Hypergraph(2, {{0, 1}}, {0.0}), Error);
  CHECK_THROWS_AS(Hypergraph(2, {{0, 1}}, {1.0, 2.0}), Error);
  const Hypergraph h(3, {{2, 0}, {1, 2}});
  CHECK(h.edge(0) == NodeSet{0, 2});
  CHECK(h.memberships()[2] == std::vector<std::size_t>{0, 1});
}

TEST_CASE("incidence matrix examples") {
  Matrix b1(3, 2);
  b1 << 1, 0, 1, 1, 0, 1;
  CHECK(incidence(Hypergraph(3, {{0, 1}, {1, 2}})).dense() == b1);
  CHECK(incidence(Hypergraph(3, {{0, 1, 2}})).dense() == Matrix::Ones(3, 1));
  Matrix b3 = Matrix::Zero(4, 2);
  b3(0, 0) = b3(1, 0) = b3(2, 1) = b3(3, 1) = 1;
  CHECK(incidence(Hypergraph(4, {{0, 1}, {2, 3}})).dense() == b3);
  const Matrix b = incidence(figure_one()).dense();
  CHECK(b.colwise().sum() == Eigen::RowVector3d(4, 3, 2));
}

TEST_CASE("degree matrices") {
  const Hypergraph h(3, {{0, 1}, {1, 2}}, {1.0, 3.0});
  const DegreeMatrices d = degree_matrices(h);
  CHECK(d.node_degrees == Eigen::Vector3d(1, 4, 3));
  CHECK(d.edge_sizes == Eigen::Vector2d(2, 2));
  // D_ee_jj = sum_k w_k |e_j cap e_k|: (2*1 + 1*3, 1*1 + 2*3).
  CHECK(d.edge_intersection_degrees == Eigen::Vector2d(5, 7));
}

TEST_CASE("clique expansion examples") {
  const WeightedGraph t = clique_expansion(Hypergraph(3, {{0, 1, 2}}));
  CHECK(t.adjacency == (Matrix::Ones(3, 3) - Matrix::Identity(3, 3)));
  const WeightedGraph m = clique_expansion(Hypergraph(2, {{0, 1}, {0, 1}}, {1.0, 2.0}));
  CHECK(m.adjacency(0, 1) == 3.0);
  CHECK(m.num_edges() == 1);
  const WeightedGraph f = clique_expansion(figure_one());
  CHECK(f.adjacency(3, 5) > 0);
  CHECK(f.adjacency(3, 6) > 0);
  CHECK(f.adjacency(5, 6) > 0);
}

TEST_CASE("line graph examples") {
  const WeightedGraph a = line_graph(Hypergraph(3, {{0, 1}, {1, 2}}));
  CHECK(a.num_nodes() == 2);
  CHECK(a.adjacency(0, 1) == 1.0);
  CHECK(line_graph(Hypergraph(4, {{0, 1}, {2, 3}})).num_edges() == 0);
  const WeightedGraph f = line_graph(figure_one());
  CHECK(f.num_edges() == 3);
  CHECK(f.adjacency == (Matrix::Ones(3, 3) - Matrix::Identity(3, 3)));
}

TEST_CASE("star and bipartite expansions") {
  const Hypergraph e(2, {{0, 1}});
  const WeightedGraph b = bipartite_expansion(e);
  CHECK(b.num_nodes() == 3);
  CHECK(b.num_edges() == 2);
  CHECK(b.adjacency(0, 2) == 1.0);
  CHECK(b.adjacency(1, 2) == 1.0);
  const StarExpansion s = star_expansion(e);
  CHECK(s.pairs.size() == 2);
  CHECK(s.graph.num_edges() == 1);
  const WeightedGraph fb = bipartite_expansion(figure_one());
  CHECK(fb.num_nodes() == 10);
  CHECK(fb.num_edges() == 9);
}

TEST_CASE("gso examples") {
  const Hypergraph e(2, {{0, 1}});
  const ShiftOperator c = gso(e, GsoKind::clique_henn);
  CHECK(c.matrix().isApprox(Matrix::Ones(2, 2)));
  CHECK(c.eigenvalues()(0) == doctest::Approx(0.0));
  CHECK(c.eigenvalues()(1) == doctest::Approx(2.0));
  const ShiftOperator g = gso(e, GsoKind::hgnn);
  CHECK(g.matrix().isApprox(0.5 * Matrix::Ones(2, 2)));
  CHECK(g.eigenvalues()(1) == doctest::Approx(1.0));
  const ShiftOperator l = gso(e, GsoKind::line_henn);
  CHECK(l.size() == 1);
  CHECK(l.matrix()(0, 0) == doctest::Approx(1.0));
  CHECK_THROWS_AS(gso(e, GsoKind::normalized_laplacian), Error);
}

TEST_CASE("every gso kind is symmetric PSD and relabeling-equivariant") {
  Rng rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const Hypergraph h = random_hypergraph(7, 5, rng, trial % 2 == 1);
    const auto np = random_perm(h.num_nodes(), rng);
    const auto ep = random_perm(h.num_edges(), rng);
    const Hypergraph hp = h.permuted(np, ep);
    for (GsoKind k : {GsoKind::clique_henn, GsoKind::line_henn, GsoKind::hgnn, GsoKind::hgnn_plus}) {
      const ShiftOperator s = gso(h, k);
      CHECK(s.matrix() == s.matrix().transpose());
      CHECK(s.spectrum().lambda_min() >= -1e-9 * s.spectrum().lambda_max());
      const auto& perm = k == GsoKind::line_henn ? ep : np;
      CHECK((gso(hp, k).matrix() - permute_symmetric(s.matrix(), perm)).cwiseAbs().maxCoeff() < 1e-14);
    }
  }
}

TEST_CASE("the paper-literal line operator agrees with the symmetrized one for unit weights") {
  Rng rng(3);
  const Hypergraph h = random_hypergraph(6, 4, rng, false);
  CHECK(line_gso_paper_literal(h).isApprox(gso(h, GsoKind::line_henn).matrix(), 1e-12));
  const Hypergraph hw = random_hypergraph(6, 4, rng, true);
  const Matrix lit = line_gso_paper_literal(hw);
  CHECK_FALSE(lit.isApprox(lit.transpose(), 1e-6));
  // Same spectrum: the two differ by a diagonal similarity.
  const Spectrum a = eigendecompose(gso(hw, GsoKind::line_henn).matrix(), false);
  Eigen::EigenSolver<Matrix> es(lit);
  std::vector<double> ev;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) ev.push_back(es.eigenvalues()(i).real());
  std::sort(ev.begin(), ev.end());
  for (std::size_t i = 0; i < ev.size(); ++i) CHECK(ev[i] == doctest::Approx(a.eigenvalues(static_cast<Eigen::Index>(i))));
}

TEST_CASE("hgnn-plus is similar to hgnn") {
  Rng rng(5);
  const Hypergraph h = random_hypergraph(6, 4, rng, true);
  CHECK(gso(h, GsoKind::hgnn_plus).matrix().isApprox(gso(h, GsoKind::hgnn).matrix(), 1e-12));
  const Spectrum lit = eigendecompose(gso(h, GsoKind::hgnn).matrix(), false);
  Eigen::EigenSolver<Matrix> es(hgnn_plus_literal(h));
  std::vector<double> ev;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) ev.push_back(es.eigenvalues()(i).real());
  std::sort(ev.begin(), ev.end());
  for (std::size_t i = 0; i < ev.size(); ++i)
    CHECK(ev[i] == doctest::Approx(lit.eigenvalues(static_cast<Eigen::Index>(i))).epsilon(1e-9));
}

TEST_CASE("clique expansion of the dual is the line graph") {
  Rng rng(17);
  for (std::size_t n = 2; n <= 6; ++n)
    for (int t = 0; t < 5; ++t) {
      const Hypergraph h = random_hypergraph(n, 1 + static_cast<std::size_t>(t) % 3, rng, false);
      const WeightedGraph a = clique_expansion(h.dual());
      const WeightedGraph b = line_graph(h);
      CHECK(a.adjacency == b.adjacency);
    }
}

TEST_CASE("2-uniform hypergraphs: clique expansion is the graph and B W B^T = A + D_v") {
  const Hypergraph h(4, {{0, 1}, {1, 2}, {2, 3}, {0, 3}}, {1.0, 2.0, 0.5, 1.5});
  const WeightedGraph g = clique_expansion(h);
  CHECK(g.adjacency(0, 1) == 1.0);
  CHECK(g.adjacency(1, 2) == 2.0);
  CHECK(g.adjacency(0, 2) == 0.0);
  const Matrix b = incidence(h).dense();
  const Vector w = Eigen::Vector4d(1.0, 2.0, 0.5, 1.5);
  const Matrix bwb = b * w.asDiagonal() * b.transpose();
  const Matrix expect = g.adjacency + Matrix(degree_matrices(h).node_degrees.asDiagonal());
  CHECK(bwb.isApprox(expect));
}

TEST_CASE("normalized laplacian examples") {
  WeightedGraph k3{Matrix::Ones(3, 3) - Matrix::Identity(3, 3)};
  const ShiftOperator l = normalized_laplacian(k3, true);
  CHECK(l.eigenvalues()(0) == doctest::Approx(0.0));
  CHECK(l.eigenvalues()(1) == doctest::Approx(1.5));
  CHECK(l.eigenvalues()(2) == doctest::Approx(1.5));
  WeightedGraph e{Matrix::Zero(2, 2)};
  e.adjacency(0, 1) = e.adjacency(1, 0) = 1.0;
  Matrix expect(2, 2);
  expect << 1, -1, -1, 1;
  CHECK(normalized_laplacian(e).matrix().isApprox(expect));
  // Kernel vector d^{1/2}.
  WeightedGraph w{Matrix::Zero(4, 4)};
  w.adjacency << 0, 1, 2, 0, 1, 0, 1, 1, 2, 1, 0, 3, 0, 1, 3, 0;
  const Vector dh = w.degrees().cwiseSqrt();
  CHECK((normalized_laplacian(w).matrix() * dh).norm() < 1e-12);
  WeightedGraph split{Matrix::Zero(4, 4)};
  split.adjacency(0, 1) = split.adjacency(1, 0) = split.adjacency(2, 3) = split.adjacency(3, 2) = 1.0;
  CHECK_THROWS_WITH_AS(normalized_laplacian(split), doctest::Contains("2 components"), Error);
}

TEST_CASE("adjacency-normalized operator") {
  WeightedGraph e{Matrix::Zero(2, 2)};
  e.adjacency(0, 1) = e.adjacency(1, 0) = 4.0;
  CHECK(adjacency_normalized(e).matrix().isApprox(Matrix::Ones(2, 2)));
}
