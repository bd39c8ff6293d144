#include "hgsp/randgraph.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>

#include <boost/math/distributions/students_t.hpp>

#include "hgsp/spectral.hpp"

namespace hgsp {

namespace {

template <class Prob>
WeightedGraph independent_edges(std::size_t n, Prob prob, Rng& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  WeightedGraph g{Matrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n))};
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (unit(rng) < prob(i, j)) {
        g.adjacency(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = 1.0;
        g.adjacency(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = 1.0;
      }
  return g;
}

}  // namespace

WeightedGraph gen_er(std::size_t n, double p, std::uint64_t seed) {
  if (!(p >= 0.0 && p <= 1.0)) fail(ErrorKind::invalid_argument, "gen_er: p must lie in [0, 1]");
  Rng rng(seed);
  return independent_edges(n, [p](std::size_t, std::size_t) { return p; }, rng);
}

WeightedGraph gen_chung_lu(const std::vector<double>& w, std::uint64_t seed) {
  double total = 0.0, top = 0.0;
  for (double x : w) {
    if (!(x > 0.0)) fail(ErrorKind::invalid_argument, "gen_chung_lu: expected degrees must be positive");
    total += x;
    top = std::max(top, x);
  }
  if (top * top > total) fail(ErrorKind::invalid_argument, "gen_chung_lu: max expected degree squared exceeds the sum");
  Rng rng(seed);
  return independent_edges(w.size(), [&](std::size_t i, std::size_t j) { return std::min(1.0, w[i] * w[j] / total); },
                           rng);
}

WeightedGraph gen_graphon(std::size_t n, const Graphon& kernel, std::uint64_t seed) {
  if (!kernel) fail(ErrorKind::invalid_argument, "gen_graphon: no kernel");
  Rng rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<double> x(n);
  for (double& v : x) v = unit(rng);
  std::sort(x.begin(), x.end());
  return independent_edges(
      n,
      [&](std::size_t i, std::size_t j) {
        const double v = kernel(x[i], x[j]);
        if (!(v >= 0.0 && v <= 1.0))
          fail(ErrorKind::invalid_argument, "gen_graphon: kernel value " + std::to_string(v) + " outside [0, 1]");
        return v;
      },
      rng);
}

WeightedGraph sample_connected(const std::function<WeightedGraph(std::uint64_t)>& generate, std::uint64_t seed,
                               std::size_t max_attempts) {
  for (std::size_t a = 0; a < max_attempts; ++a) {
    WeightedGraph g = generate(derive_seed(seed, a));
    if (g.num_nodes() > 0 && g.component_count() == 1) return g;
  }
  fail(ErrorKind::assumption, "no connected sample after " + std::to_string(max_attempts) + " attempts");
}

EsdSample esd(const ShiftOperator& s) {
  const Vector& ev = s.eigenvalues();
  return {std::vector<double>(ev.data(), ev.data() + ev.size()), static_cast<std::size_t>(ev.size()), "none"};
}

EsdSample laplacian_deviation_esd(const WeightedGraph& g) {
  const ShiftOperator lap = normalized_laplacian(g);
  const auto n = g.adjacency.rows();
  if (n < 3) fail(ErrorKind::invalid_argument, "laplacian_deviation_esd: need at least 3 nodes");
  const Vector d = g.degrees();
  const Vector u = d.cwiseSqrt().normalized();
  const Matrix centered = Matrix::Identity(n, n) - lap.matrix() - u * u.transpose();
  const double wbar = d.mean();
  const double p = wbar / static_cast<double>(n - 1);
  if (!(p < 1.0)) fail(ErrorKind::invalid_argument, "laplacian_deviation_esd: complete graph has no fluctuations");
  const double scale = std::sqrt(wbar) / (2.0 * std::sqrt(1.0 - p));
  const Spectrum sp = eigendecompose(0.5 * (centered + centered.transpose()), false);
  EsdSample e;
  e.n = static_cast<std::size_t>(n);
  e.eigenvalues.resize(e.n);
  for (std::size_t i = 0; i < e.n; ++i) e.eigenvalues[i] = scale * sp.eigenvalues(static_cast<Eigen::Index>(i));
  e.scaling = "(I - L - uu^T) * sqrt(wbar) / (2 sqrt(1 - wbar/(n-1))), wbar = " + std::to_string(wbar);
  return e;
}

double semicircle_density(double x) {
  if (x <= -1.0 || x >= 1.0) return 0.0;
  return 2.0 / std::numbers::pi * std::sqrt(1.0 - x * x);
}

double semicircle_cdf(double x) {
  if (x <= -1.0) return 0.0;
  if (x >= 1.0) return 1.0;
  return 0.5 + (x * std::sqrt(1.0 - x * x) + std::asin(x)) / std::numbers::pi;
}

double semicircle_distance(const EsdSample& e) {
  std::vector<double> v = e.eigenvalues;
  std::sort(v.begin(), v.end());
  const double n = static_cast<double>(v.size());
  double ks = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double f = semicircle_cdf(v[i]);
    ks = std::max({ks, static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n});
  }
  return ks;
}

std::string to_string(RandomModel m) {
  switch (m) {
    case RandomModel::er: return "er";
    case RandomModel::chung_lu: return "chung-lu";
    case RandomModel::graphon: return "graphon";
  }
  return "er";
}

RandomModel parse_random_model(std::string_view name) {
  for (RandomModel m : {RandomModel::er, RandomModel::chung_lu, RandomModel::graphon})
    if (to_string(m) == name) return m;
  fail(ErrorKind::invalid_argument, "unknown random graph model '" + std::string(name) + "'");
}

WeightedGraph RandomModelSpec::sample(std::size_t n, std::uint64_t seed) const {
  switch (model) {
    case RandomModel::er: return gen_er(n, p, seed);
    case RandomModel::chung_lu:
      if (!degrees) fail(ErrorKind::invalid_argument, "chung-lu model needs expected degrees");
      return gen_chung_lu(degrees(n), seed);
    case RandomModel::graphon: return gen_graphon(n, kernel, seed);
  }
  fail(ErrorKind::invalid_argument, "unknown random graph model");
}

double pair_similarity(const WeightedGraph& a, const WeightedGraph& b) {
  const ShiftOperator sa = normalized_laplacian(a, true);
  const ShiftOperator sb = normalized_laplacian(b);
  return spectral_similarity(sa.matrix(), align_to_eigenbasis(sa.spectrum(), sb.spectrum())).epsilon;
}

SimilarityDecayStudy similarity_decay(const RandomModelSpec& model, const std::vector<std::size_t>& sizes,
                                      std::size_t trials, std::uint64_t seed) {
  if (trials == 0) fail(ErrorKind::invalid_argument, "similarity_decay: trials must be positive");
  if (sizes.empty()) fail(ErrorKind::invalid_argument, "similarity_decay: no sizes");
  SimilarityDecayStudy st;
  st.model = to_string(model.model);
  st.params = model.params;
  st.trials = trials;
  st.seed = seed;
  for (std::size_t n : sizes) {
    std::vector<DecayRow> rows(trials);
    std::vector<Vector> spectra(2 * trials);
    std::vector<std::string> errors(trials);
#pragma omp parallel for schedule(dynamic, 1)
    for (std::ptrdiff_t t = 0; t < static_cast<std::ptrdiff_t>(trials); ++t) {
      const auto k = static_cast<std::size_t>(t);
      try {
        auto gen = [&](std::uint64_t s) { return model.sample(n, s); };
        const WeightedGraph a = sample_connected(gen, derive_seed(seed, n, k, 0));
        const WeightedGraph b = sample_connected(gen, derive_seed(seed, n, k, 1));
        const ShiftOperator sa = normalized_laplacian(a, true);
        const ShiftOperator sb = normalized_laplacian(b);
        rows[k] = {n, k,
                   spectral_similarity(sa.matrix(), align_to_eigenbasis(sa.spectrum(), sb.spectrum())).epsilon,
                   sa.spectrum().smallest_nonzero()};
        spectra[2 * k] = sa.eigenvalues();
        spectra[2 * k + 1] = sb.eigenvalues();
      } catch (const std::exception& e) {
        errors[k] = e.what();
      }
    }
    for (const auto& e : errors)
      if (!e.empty()) fail(ErrorKind::assumption, "similarity_decay (n = " + std::to_string(n) + "): " + e);

    DecaySize sz;
    sz.n = n;
    sz.min_gap = std::numeric_limits<double>::infinity();
    for (const auto& r : rows) {
      sz.mean += r.epsilon / static_cast<double>(trials);
      sz.min_gap = std::min(sz.min_gap, r.min_nonzero_eig);
    }
    for (const auto& r : rows)
      sz.sd += (r.epsilon - sz.mean) * (r.epsilon - sz.mean) / static_cast<double>(std::max<std::size_t>(trials - 1, 1));
    sz.sd = std::sqrt(sz.sd);
    for (Eigen::Index i = 0; i < static_cast<Eigen::Index>(n); ++i) {
      double lo = spectra[0](i), hi = spectra[0](i);
      for (const auto& sp : spectra) {
        lo = std::min(lo, sp(i));
        hi = std::max(hi, sp(i));
      }
      sz.concentration = std::max(sz.concentration, 0.5 * (hi - lo));
    }
    st.sizes.push_back(sz);
    st.rows.insert(st.rows.end(), rows.begin(), rows.end());
  }

  const std::size_t k = st.sizes.size();
  if (k >= 2) {
    std::vector<double> lx, ly;
    for (const auto& s : st.sizes) {
      lx.push_back(std::log(static_cast<double>(s.n)));
      ly.push_back(std::log(s.mean));
    }
    const double mx = std::accumulate(lx.begin(), lx.end(), 0.0) / static_cast<double>(k);
    const double my = std::accumulate(ly.begin(), ly.end(), 0.0) / static_cast<double>(k);
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
      sxx += (lx[i] - mx) * (lx[i] - mx);
      sxy += (lx[i] - mx) * (ly[i] - my);
    }
    st.slope = sxy / sxx;
    st.slope_ci_low = st.slope_ci_high = st.slope;
    if (k >= 3) {
      double sse = 0.0;
      for (std::size_t i = 0; i < k; ++i) {
        const double r = ly[i] - (my + st.slope * (lx[i] - mx));
        sse += r * r;
      }
      const double se = std::sqrt(sse / static_cast<double>(k - 2) / sxx);
      const double tq =
          boost::math::quantile(boost::math::students_t(static_cast<double>(k - 2)), 0.975);
      st.slope_ci_low = st.slope - tq * se;
      st.slope_ci_high = st.slope + tq * se;
    }
  }
  return st;
}

}  // namespace hgsp
