#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "hgsp/hypergraph.hpp"
#include "hgsp/kernels.hpp"

namespace hgsp {

/// Q(x) = sum_e max_{i,j in e} (x_i - x_j)^2
double energy(const Hypergraph& h, const Vector& x);

/// Half the gradient of the energy. Each hyperedge contributes
/// +(x_i* - x_j*) at i* and -(x_i* - x_j*) at j*, where i* is the
/// smallest-index maximizer and j* the smallest-index minimizer; hyperedges
/// with zero spread contribute nothing.
Vector hypergraph_laplacian(const Hypergraph& h, const Vector& x);

struct Trajectory {
  std::vector<Vector> states;   // steps + 1 entries, states[0] = x0
  std::vector<double> energies;
  bool energy_increased = false;  // monotonicity monitor tripped
  std::size_t first_increase = 0;
};

/// Explicit Euler on dx/dt = -L(x). Non-finite states raise a numerical
/// error naming the step.
Trajectory diffuse(const Hypergraph& h, const Vector& x0, std::size_t steps, double step_size = 0.05);

struct GeometricHypergraph {
  std::vector<kernels::Point3> points;     // retained points, one per node
  std::vector<std::size_t> original_index;  // sample index of each retained point
  double radius = 0.0;
  Hypergraph hypergraph;
};

/// Maximal cliques (size >= 2) of the radius-proximity graph, pivoted
/// Bron-Kerbosch. Each clique is sorted; the list is sorted lexicographically.
std::vector<NodeSet> maximal_cliques(const std::vector<std::vector<std::size_t>>& neighbors);

/// Vietoris-Rips hypergraph of a point set: maximal cliques become
/// hyperedges. Points with no neighbor within the radius are dropped and the
/// rest renumbered in sample order.
GeometricHypergraph vietoris_rips(std::vector<kernels::Point3> points, double radius);

struct TorusParams {
  double major = 1.5;  // centerline radius
  double minor = 0.5;  // tube radius
};

/// Area-uniform samples: angle phi uniform, tube angle theta accepted with
/// probability (R + r cos theta) / (R + r).
std::vector<kernels::Point3> sample_torus(std::size_t n_points, std::uint64_t seed, TorusParams torus = {});

/// Requires at least 10 hyperedges.
GeometricHypergraph sample_torus_vr(std::size_t n_points = 500, double radius = 0.4, std::uint64_t seed = 0,
                                    TorusParams torus = {});

struct Sample {
  Vector signal;
  int label = 0;
  int time = 0;
};

struct DatasetMeta {
  std::size_t t_max = 30;
  double noise_sd = 0.1;
  double step_size = 0.05;
  std::vector<std::size_t> sources;  // source hyperedge per label
};

struct LabeledDataset {
  std::vector<Sample> samples;
  std::vector<std::size_t> train;  // indices into samples
  std::vector<std::size_t> test;
  std::uint64_t seed = 0;
  std::size_t num_nodes = 0;
  std::size_t num_edges = 0;
  DatasetMeta meta;
};

struct DatasetParams {
  std::size_t num_sources = 10;
  std::size_t t_max = 30;
  double noise_sd = 0.1;
  double step_size = 0.05;
  std::size_t n_train = 500;
  std::size_t n_test = 300;
};

/// Sources are drawn without replacement; each source trajectory starts at
/// its hyperedge indicator plus Normal(0, sd^2) node noise. A sample picks a
/// uniform source and a uniform time in [0, t_max] and adds Normal(0, sd^2)
/// measurement noise. Samples [0, n_train) form the training split.
LabeledDataset generate_dataset(const Hypergraph& h, std::uint64_t seed, const DatasetParams& params = {});

}  // namespace hgsp
