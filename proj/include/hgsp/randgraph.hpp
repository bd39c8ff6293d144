#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "hgsp/hypergraph.hpp"

namespace hgsp {

/// G(n, p): independent edges with probability p, no self-loops.
WeightedGraph gen_er(std::size_t n, double p, std::uint64_t seed);

/// Edge {i, j} with probability min(1, w_i w_j / sum w). Requires positive
/// weights with max w_i^2 <= sum w.
WeightedGraph gen_chung_lu(const std::vector<double>& expected_degrees, std::uint64_t seed);

using Graphon = std::function<double(double, double)>;

/// Latent points drawn uniformly and sorted; edge {i, j} with probability
/// W(x_(i), x_(j)). Kernel values outside [0, 1] are rejected.
WeightedGraph gen_graphon(std::size_t n, const Graphon& kernel, std::uint64_t seed);

/// Calls `generate(derive_seed(seed, attempt))` until the graph is connected.
/// Throws `assumption` after `max_attempts` disconnected draws.
WeightedGraph sample_connected(const std::function<WeightedGraph(std::uint64_t)>& generate, std::uint64_t seed,
                               std::size_t max_attempts = 100);

struct EsdSample {
  std::vector<double> eigenvalues;  // ascending
  std::size_t n = 0;
  std::string scaling;
};

/// Eigenvalues of a shift operator, unscaled.
EsdSample esd(const ShiftOperator& s);

/// ESD of the centered normalized adjacency of a connected graph: with
/// u = d^{1/2} / ||d^{1/2}||, the eigenvalues of
/// (I - L - u u^T) * sqrt(wbar) / (2 sqrt(1 - wbar / (n - 1))),
/// where wbar is the average degree. For dense Erdos-Renyi graphs the bulk
/// approaches the semicircle on [-1, 1].
EsdSample laplacian_deviation_esd(const WeightedGraph& g);

/// (2/pi) sqrt(1 - x^2) on [-1, 1], zero outside.
double semicircle_density(double x);
double semicircle_cdf(double x);

/// Kolmogorov-Smirnov distance between the empirical CDF and the semicircle CDF.
double semicircle_distance(const EsdSample& e);

enum class RandomModel { er, chung_lu, graphon };
std::string to_string(RandomModel m);
RandomModel parse_random_model(std::string_view name);

struct RandomModelSpec {
  RandomModel model = RandomModel::er;
  double p = 0.5;                                               // er
  std::function<std::vector<double>(std::size_t)> degrees;      // chung-lu, given n
  Graphon kernel;                                               // graphon
  std::string params;                                           // human-readable description

  WeightedGraph sample(std::size_t n, std::uint64_t seed) const;
};

struct DecayRow {
  std::size_t n = 0;
  std::size_t trial = 0;
  double epsilon = 0.0;
  double min_nonzero_eig = 0.0;
};

struct DecaySize {
  std::size_t n = 0;
  double mean = 0.0;
  double sd = 0.0;
  double min_gap = 0.0;            // smallest min-nonzero eigenvalue over the trials
  double concentration = 0.0;      // max_i half-range of lambda_i across all sampled spectra
};

struct SimilarityDecayStudy {
  std::string model;
  std::string params;
  std::size_t trials = 0;
  std::uint64_t seed = 0;
  std::vector<DecayRow> rows;
  std::vector<DecaySize> sizes;
  double slope = 0.0;  // least squares of log(mean eps) on log(n)
  double slope_ci_low = 0.0;   // 95% t interval
  double slope_ci_high = 0.0;
};

/// Coefficient between the normalized Laplacians of two connected graphs of
/// equal size. Independent samples have different eigenbases and kernels, so
/// the second spectrum is realigned onto the eigenbasis of the first before
/// the comparison (see align_to_eigenbasis).
double pair_similarity(const WeightedGraph& a, const WeightedGraph& b);

/// For each size and trial, two independent connected samples from
/// per-trial derived seeds; epsilon is pair_similarity. The aggregate does not
/// depend on the thread schedule.
SimilarityDecayStudy similarity_decay(const RandomModelSpec& model, const std::vector<std::size_t>& sizes,
                                      std::size_t trials, std::uint64_t seed);

}  // namespace hgsp
