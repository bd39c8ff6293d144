#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "hgsp/common.hpp"
#include "hgsp/shift_operator.hpp"

namespace hgsp {

using NodeSet = std::vector<std::size_t>;

/// Node/hyperedge structure with positive hyperedge weights.
///
/// Invariants (checked on construction): node indices lie in [0, n), no
/// duplicate node within a hyperedge, every hyperedge has at least two nodes,
/// every weight is positive, and every node belongs to some hyperedge.
/// Node indices within each hyperedge are stored ascending.
class Hypergraph {
 public:
  Hypergraph(std::size_t n, std::vector<NodeSet> edges, std::vector<double> weights = {});

  std::size_t num_nodes() const { return n_; }
  std::size_t num_edges() const { return edges_.size(); }
  const std::vector<NodeSet>& edges() const { return edges_; }
  const NodeSet& edge(std::size_t j) const { return edges_[j]; }
  const std::vector<double>& weights() const { return weights_; }
  /// For each node, the ascending list of hyperedges containing it.
  const std::vector<std::vector<std::size_t>>& memberships() const { return memberships_; }

  /// Roles of nodes and hyperedges exchanged, unit weights. Dual hyperedges
  /// may be singletons (nodes of degree one), so the size check is relaxed.
  Hypergraph dual() const;

  /// Node i -> node_perm[i], hyperedge j -> edge_perm[j].
  Hypergraph permuted(const std::vector<std::size_t>& node_perm,
                      const std::vector<std::size_t>& edge_perm) const;

 private:
  Hypergraph(std::size_t n, std::vector<NodeSet> edges, std::vector<double> weights,
             std::size_t min_edge_size);

  std::size_t n_ = 0;
  std::vector<NodeSet> edges_;
  std::vector<double> weights_;
  std::vector<std::vector<std::size_t>> memberships_;
};

/// n x m incidence matrix, B(i, j) = 1 iff node i is in hyperedge j.
struct IncidenceMatrix {
  Eigen::SparseMatrix<double> entries;
  Matrix dense() const { return Matrix(entries); }
};

struct DegreeMatrices {
  Vector node_degrees;               // diag(D_v): weighted node degree
  Vector edge_sizes;                 // diag(D_e): hyperedge cardinality
  Vector edge_intersection_degrees;  // diag(D_ee): sum_k w_k |e_j cap e_k|
};

/// Undirected weighted graph stored as a dense symmetric adjacency with zero
/// diagonal.
struct WeightedGraph {
  Matrix adjacency;

  std::size_t num_nodes() const { return static_cast<std::size_t>(adjacency.rows()); }
  std::size_t num_edges() const;
  Vector degrees() const { return adjacency.rowwise().sum(); }
  /// Component index per node, components numbered in order of first node.
  std::vector<std::size_t> components() const;
  std::size_t component_count() const;
};

IncidenceMatrix incidence(const Hypergraph& h);
DegreeMatrices degree_matrices(const Hypergraph& h);

/// Off-diagonal part of B W B^T.
WeightedGraph clique_expansion(const Hypergraph& h);
/// Off-diagonal part of B^T B: edge weight |e_j cap e_k|.
WeightedGraph line_graph(const Hypergraph& h);

struct StarExpansion {
  std::vector<std::pair<std::size_t, std::size_t>> pairs;  // (node, hyperedge)
  WeightedGraph graph;  // pairs joined when they share a node or a hyperedge
};
StarExpansion star_expansion(const Hypergraph& h);

/// n + m vertices (nodes first, then hyperedges), node i joined to n + j for
/// each incidence.
WeightedGraph bipartite_expansion(const Hypergraph& h);

/// Shift operators of the hypergraph representations:
///   clique-henn  D_v^{-1/2} B W B^T D_v^{-1/2}                    (n x n)
///   line-henn    D_ee^{-1/2} W^{1/2} B^T B W^{1/2} D_ee^{-1/2}     (m x m)
///   hgnn         D_v^{-1/2} B W D_e^{-1} B^T D_v^{-1/2}            (n x n)
///   hgnn-plus    D_v^{-1} B W D_e^{-1} B^T, made symmetric by the
///                similarity D_v^{1/2} (.) D_v^{-1/2}               (n x n)
ShiftOperator gso(const Hypergraph& h, GsoKind kind, bool with_vectors = false);

/// Unsymmetrized line operator D_ee^{-1/2} B^T B W D_ee^{-1/2}; equals the
/// line-henn operator when W = I.
Matrix line_gso_paper_literal(const Hypergraph& h);
/// Unsymmetrized D_v^{-1} B W D_e^{-1} B^T.
Matrix hgnn_plus_literal(const Hypergraph& h);

/// I - D^{-1/2} A D^{-1/2}; requires a connected graph.
ShiftOperator normalized_laplacian(const WeightedGraph& g, bool with_vectors = false);
/// I + D^{-1/2} A D^{-1/2}; requires every node to have positive degree.
ShiftOperator adjacency_normalized(const WeightedGraph& g, bool with_vectors = false);

}  // namespace hgsp
