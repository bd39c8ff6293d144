#include "hgsp/hypergraph.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace hgsp {

Hypergraph::Hypergraph(std::size_t n, std::vector<NodeSet> edges, std::vector<double> weights)
    : Hypergraph(n, std::move(edges), std::move(weights), 2) {}

Hypergraph::Hypergraph(std::size_t n, std::vector<NodeSet> edges, std::vector<double> weights,
                       std::size_t min_edge_size)
    : n_(n), edges_(std::move(edges)), weights_(std::move(weights)) {
  if (n_ == 0) fail(ErrorKind::invalid_argument, "hypergraph needs at least one node");
  if (edges_.empty()) fail(ErrorKind::invalid_argument, "hypergraph needs at least one hyperedge");
  if (weights_.empty()) weights_.assign(edges_.size(), 1.0);
  if (weights_.size() != edges_.size())
    fail(ErrorKind::invalid_argument, "hyperedge weight count does not match hyperedge count");

  memberships_.assign(n_, {});
  for (std::size_t j = 0; j < edges_.size(); ++j) {
    auto& e = edges_[j];
    std::sort(e.begin(), e.end());
    std::ostringstream where;
    where << "hyperedge " << j;
    if (e.size() < min_edge_size) fail(ErrorKind::invalid_argument, where.str() + " has fewer than 2 nodes");
    if (std::adjacent_find(e.begin(), e.end()) != e.end())
      fail(ErrorKind::invalid_argument, where.str() + " contains a duplicate node");
    if (e.back() >= n_) fail(ErrorKind::invalid_argument, where.str() + " references a node outside [0, n)");
    if (!(weights_[j] > 0.0) || !std::isfinite(weights_[j]))
      fail(ErrorKind::invalid_argument, where.str() + " has a non-positive weight");
    for (std::size_t i : e) memberships_[i].push_back(j);
  }
  for (std::size_t i = 0; i < n_; ++i)
    if (memberships_[i].empty())
      fail(ErrorKind::invalid_argument,
           "node " + std::to_string(i) + " belongs to no hyperedge (isolated node)");
}

Hypergraph Hypergraph::dual() const {
  return Hypergraph(edges_.size(), memberships_, std::vector<double>(n_, 1.0), 1);
}

Hypergraph Hypergraph::permuted(const std::vector<std::size_t>& node_perm,
                                const std::vector<std::size_t>& edge_perm) const {
  if (node_perm.size() != n_ || edge_perm.size() != edges_.size())
    fail(ErrorKind::invalid_argument, "permutation size mismatch");
  std::vector<NodeSet> edges(edges_.size());
  std::vector<double> weights(edges_.size());
  for (std::size_t j = 0; j < edges_.size(); ++j) {
    NodeSet e;
    e.reserve(edges_[j].size());
    for (std::size_t i : edges_[j]) e.push_back(node_perm[i]);
    edges[edge_perm[j]] = std::move(e);
    weights[edge_perm[j]] = weights_[j];
  }
  return Hypergraph(n_, std::move(edges), std::move(weights), 1);
}

std::size_t WeightedGraph::num_edges() const {
  std::size_t count = 0;
  for (Eigen::Index i = 0; i < adjacency.rows(); ++i)
    for (Eigen::Index j = i + 1; j < adjacency.cols(); ++j)
      if (adjacency(i, j) != 0.0) ++count;
  return count;
}

std::vector<std::size_t> WeightedGraph::components() const {
  const std::size_t n = num_nodes();
  constexpr std::size_t unset = static_cast<std::size_t>(-1);
  std::vector<std::size_t> comp(n, unset);
  std::size_t next = 0;
  std::vector<std::size_t> stack;
  for (std::size_t s = 0; s < n; ++s) {
    if (comp[s] != unset) continue;
    comp[s] = next;
    stack.push_back(s);
    while (!stack.empty()) {
      const std::size_t u = stack.back();
      stack.pop_back();
      for (std::size_t v = 0; v < n; ++v) {
        if (comp[v] == unset && adjacency(static_cast<Eigen::Index>(u), static_cast<Eigen::Index>(v)) != 0.0) {
          comp[v] = next;
          stack.push_back(v);
        }
      }
    }
    ++next;
  }
  return comp;
}

std::size_t WeightedGraph::component_count() const {
  const auto comp = components();
  return comp.empty() ? 0 : *std::max_element(comp.begin(), comp.end()) + 1;
}

IncidenceMatrix incidence(const Hypergraph& h) {
  std::vector<Eigen::Triplet<double>> trips;
  for (std::size_t j = 0; j < h.num_edges(); ++j)
    for (std::size_t i : h.edge(j))
      trips.emplace_back(static_cast<int>(i), static_cast<int>(j), 1.0);
  IncidenceMatrix b;
  b.entries.resize(static_cast<Eigen::Index>(h.num_nodes()), static_cast<Eigen::Index>(h.num_edges()));
  b.entries.setFromTriplets(trips.begin(), trips.end());
  return b;
}

namespace {

Vector weight_vector(const Hypergraph& h) {
  return Eigen::Map<const Vector>(h.weights().data(), static_cast<Eigen::Index>(h.weights().size()));
}

// B^T B as a dense matrix: entry (j, k) = |e_j cap e_k|.
Matrix edge_overlaps(const Hypergraph& h) {
  const Eigen::SparseMatrix<double> b = incidence(h).entries;
  Eigen::SparseMatrix<double> btb = Eigen::SparseMatrix<double>(b.transpose()) * b;
  return Matrix(btb);
}

Matrix off_diagonal(Matrix m) {
  m.diagonal().setZero();
  return m;
}

}  // namespace

DegreeMatrices degree_matrices(const Hypergraph& h) {
  DegreeMatrices d;
  const Vector w = weight_vector(h);
  d.node_degrees = Vector::Zero(static_cast<Eigen::Index>(h.num_nodes()));
  d.edge_sizes.resize(static_cast<Eigen::Index>(h.num_edges()));
  for (std::size_t j = 0; j < h.num_edges(); ++j) {
    d.edge_sizes(static_cast<Eigen::Index>(j)) = static_cast<double>(h.edge(j).size());
    for (std::size_t i : h.edge(j)) d.node_degrees(static_cast<Eigen::Index>(i)) += w(static_cast<Eigen::Index>(j));
  }
  d.edge_intersection_degrees = edge_overlaps(h) * w;
  return d;
}

WeightedGraph clique_expansion(const Hypergraph& h) {
  const auto n = static_cast<Eigen::Index>(h.num_nodes());
  WeightedGraph g{Matrix::Zero(n, n)};
  for (std::size_t j = 0; j < h.num_edges(); ++j) {
    const auto& e = h.edge(j);
    for (std::size_t a = 0; a < e.size(); ++a)
      for (std::size_t b = a + 1; b < e.size(); ++b) {
        const auto u = static_cast<Eigen::Index>(e[a]);
        const auto v = static_cast<Eigen::Index>(e[b]);
        g.adjacency(u, v) += h.weights()[j];
        g.adjacency(v, u) += h.weights()[j];
      }
  }
  return g;
}

WeightedGraph line_graph(const Hypergraph& h) { return WeightedGraph{off_diagonal(edge_overlaps(h))}; }

StarExpansion star_expansion(const Hypergraph& h) {
  StarExpansion s;
  for (std::size_t j = 0; j < h.num_edges(); ++j)
    for (std::size_t i : h.edge(j)) s.pairs.emplace_back(i, j);
  const auto p = static_cast<Eigen::Index>(s.pairs.size());
  s.graph.adjacency = Matrix::Zero(p, p);
  for (Eigen::Index a = 0; a < p; ++a)
    for (Eigen::Index b = a + 1; b < p; ++b) {
      const auto& x = s.pairs[static_cast<std::size_t>(a)];
      const auto& y = s.pairs[static_cast<std::size_t>(b)];
      if (x.first == y.first || x.second == y.second) {
        s.graph.adjacency(a, b) = 1.0;
        s.graph.adjacency(b, a) = 1.0;
      }
    }
  return s;
}

WeightedGraph bipartite_expansion(const Hypergraph& h) {
  const auto n = static_cast<Eigen::Index>(h.num_nodes());
  const auto total = n + static_cast<Eigen::Index>(h.num_edges());
  WeightedGraph g{Matrix::Zero(total, total)};
  for (std::size_t j = 0; j < h.num_edges(); ++j)
    for (std::size_t i : h.edge(j)) {
      const auto u = static_cast<Eigen::Index>(i);
      const auto v = n + static_cast<Eigen::Index>(j);
      g.adjacency(u, v) = 1.0;
      g.adjacency(v, u) = 1.0;
    }
  return g;
}

namespace {

Vector inv_sqrt(const Vector& d, const char* what) {
  Vector out(d.size());
  for (Eigen::Index i = 0; i < d.size(); ++i) {
    if (!(d(i) > 0.0))
      fail(ErrorKind::invalid_argument,
           std::string(what) + " " + std::to_string(i) + " has zero degree");
    out(i) = 1.0 / std::sqrt(d(i));
  }
  return out;
}

Matrix clique_matrix(const Hypergraph& h, const DegreeMatrices& d) {
  const Matrix b = incidence(h).dense();
  const Vector w = weight_vector(h);
  const Vector s = inv_sqrt(d.node_degrees, "node");
  const Matrix bw = s.asDiagonal() * b * w.cwiseSqrt().asDiagonal();
  return bw * bw.transpose();
}

Matrix hgnn_matrix(const Hypergraph& h, const DegreeMatrices& d) {
  const Matrix b = incidence(h).dense();
  const Vector w = weight_vector(h);
  const Vector s = inv_sqrt(d.node_degrees, "node");
  const Vector scale = (w.array() / d.edge_sizes.array()).sqrt();
  const Matrix bw = s.asDiagonal() * b * scale.asDiagonal();
  return bw * bw.transpose();
}

}  // namespace

ShiftOperator gso(const Hypergraph& h, GsoKind kind, bool with_vectors) {
  const DegreeMatrices d = degree_matrices(h);
  switch (kind) {
    case GsoKind::clique_henn:
      return ShiftOperator::create(clique_matrix(h, d), kind, with_vectors);
    case GsoKind::line_henn: {
      const Vector w = weight_vector(h);
      const Vector s = inv_sqrt(d.edge_intersection_degrees, "hyperedge");
      const Vector scale = s.cwiseProduct(w.cwiseSqrt());
      const Matrix m = scale.asDiagonal() * edge_overlaps(h) * scale.asDiagonal();
      return ShiftOperator::create(m, kind, with_vectors);
    }
    case GsoKind::hgnn:
    case GsoKind::hgnn_plus:
      return ShiftOperator::create(hgnn_matrix(h, d), kind, with_vectors);
    default:
      fail(ErrorKind::invalid_argument, "gso: " + to_string(kind) + " is not a hypergraph operator kind");
  }
}

Matrix line_gso_paper_literal(const Hypergraph& h) {
  const DegreeMatrices d = degree_matrices(h);
  const Vector s = inv_sqrt(d.edge_intersection_degrees, "hyperedge");
  return s.asDiagonal() * edge_overlaps(h) * weight_vector(h).asDiagonal() * s.asDiagonal();
}

Matrix hgnn_plus_literal(const Hypergraph& h) {
  const DegreeMatrices d = degree_matrices(h);
  const Matrix b = incidence(h).dense();
  const Vector w = weight_vector(h);
  return d.node_degrees.cwiseInverse().asDiagonal() * b *
         (w.array() / d.edge_sizes.array()).matrix().asDiagonal() * b.transpose();
}

ShiftOperator normalized_laplacian(const WeightedGraph& g, bool with_vectors) {
  const std::size_t comps = g.component_count();
  if (comps != 1)
    fail(ErrorKind::assumption,
         "normalized_laplacian: graph is disconnected (" + std::to_string(comps) + " components)");
  const Vector s = inv_sqrt(g.degrees(), "node");
  const auto n = g.adjacency.rows();
  const Matrix m = Matrix::Identity(n, n) - s.asDiagonal() * g.adjacency * s.asDiagonal();
  return ShiftOperator::create(m, GsoKind::normalized_laplacian, with_vectors);
}

ShiftOperator adjacency_normalized(const WeightedGraph& g, bool with_vectors) {
  const Vector s = inv_sqrt(g.degrees(), "node");
  const auto n = g.adjacency.rows();
  const Matrix m = Matrix::Identity(n, n) + s.asDiagonal() * g.adjacency * s.asDiagonal();
  return ShiftOperator::create(m, GsoKind::adjacency_normalized, with_vectors);
}

}  // namespace hgsp
