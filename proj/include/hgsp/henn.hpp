#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hgsp/gnn.hpp"
#include "hgsp/hypergraph.hpp"

namespace hgsp {

/// Node signals (n rows) or hyperedge signals (m rows).
enum class Side { node, edge };
Side side_of(GsoKind kind);

/// Max-pooling along incidence: out(j, c) = max_{i in e_j} x(i, c).
Matrix pool_node_to_edge(const Matrix& x, const Hypergraph& h);
/// out(i, c) = max_{j : i in e_j} x(j, c).
Matrix pool_edge_to_node(const Matrix& x, const Hypergraph& h);

/// Hypergraph plus the shift operators its networks use, built once.
class HypergraphContext {
 public:
  HypergraphContext(Hypergraph h, const std::vector<GsoKind>& kinds);

  const Hypergraph& hypergraph() const { return h_; }
  const ShiftOperator& operator_for(GsoKind kind) const;
  bool has(GsoKind kind) const { return gsos_.count(kind) > 0; }

 private:
  Hypergraph h_;
  std::map<GsoKind, ShiftOperator> gsos_;
};

enum class Architecture { henn, clique_only, line_only, hgnn };
std::string to_string(Architecture a);
Architecture parse_architecture(std::string_view name);
/// Operator kinds used by an architecture, in stage order.
std::vector<GsoKind> stage_kinds(Architecture a);

/// A GNN run on one hypergraph representation.
struct Stage {
  GsoKind kind = GsoKind::clique_henn;
  GnnModel model;
};

/// Sequence of stages joined by incidence max-pooling. Input is a node
/// signal; whenever consecutive stages live on different sides the signal is
/// pooled across, and a node-side result is pooled to hyperedges at the end.
/// The readout selects the candidate hyperedges (class logits).
struct HennModel {
  std::string architecture = "henn";
  std::vector<Stage> stages;
  std::vector<std::size_t> candidates;

  std::size_t parameter_count() const;
  std::vector<double> flatten() const;
  void unflatten(const std::vector<double>& params);
  std::string parameter_path(std::size_t flat_index) const;
  std::size_t total_layers() const;
};

struct ArchitectureSpec {
  Architecture architecture = Architecture::henn;
  std::size_t hidden = 2;           // hidden feature width
  std::size_t taps = 3;             // K + 1
  std::size_t filter_layers = 2;    // graph-filter layers in total
  Nonlinearity nonlinearity = Nonlinearity::relu;
  double init_scale = 0.5;
};

/// Input and output width 1. HENN splits `filter_layers` between its clique
/// and line stages (clique gets the extra one when odd); the single-operator
/// architectures put all layers on one operator.
HennModel make_model(const ArchitectureSpec& spec, const std::vector<std::size_t>& candidates, Rng& rng);

struct HennCache {
  std::size_t batch = 1;
  std::vector<GnnCache> stages;
  std::vector<Eigen::MatrixXi> pool_argmax;
  std::vector<Eigen::Index> pool_input_rows;
};

/// Hyperedge signals, m x (batch * f_out).
Matrix henn_forward(const HennModel& model, const HypergraphContext& ctx, const Matrix& x0,
                    std::size_t batch = 1, HennCache* cache = nullptr);

/// Candidate rows of a width-1 hyperedge output: logits are candidates x batch.
Matrix readout(const HennModel& model, const Matrix& edge_output);

/// forward + readout.
Matrix henn_logits(const HennModel& model, const HypergraphContext& ctx, const Matrix& x0, std::size_t batch = 1,
                   HennCache* cache = nullptr);

/// Gradient of the flattened parameters given dLoss/dLogits.
std::vector<double> henn_backward(const HennModel& model, const HypergraphContext& ctx, const HennCache& cache,
                                  const Matrix& logit_grad, Matrix* input_grad = nullptr);

/// Same pipeline with a selected architecture's operators: identical to
/// henn_forward, kept as the entry point for the single-operator baselines.
Matrix baseline_forward(const HennModel& model, const HypergraphContext& ctx, const Matrix& x0);

struct Representation {
  std::size_t layers = 1;
  std::size_t features = 1;
};

/// sum_i C L_i eps_i prod_j f_j^{L_j}
double theorem2_bound(const std::vector<Representation>& reps, const std::vector<double>& epsilons,
                      double lipschitz);

struct Theorem2Report {
  std::size_t trials = 0;
  std::vector<double> epsilons;  // per stage, measured
  double lipschitz = 0.0;
  double max_deviation = 0.0;
  double bound = 0.0;
  std::size_t violations = 0;
};

/// Empirical check on two hypergraphs with the same node and hyperedge counts.
/// Per-stage coefficients are measured with spectral_similarity; the
/// deviation is the feature-norm sum of the hyperedge outputs for unit-norm
/// node inputs.
Theorem2Report check_theorem2(const HennModel& model, const HypergraphContext& a, const HypergraphContext& b,
                              std::size_t trials, Rng& rng, double slack = kDefaultSlack);

}  // namespace hgsp
