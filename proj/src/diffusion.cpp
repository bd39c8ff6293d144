#include "hgsp/diffusion.hpp"

#include <algorithm>
#include <cmath>
#include <iterator>
#include <numbers>
#include <random>

namespace hgsp {

namespace {

void check_signal(const Hypergraph& h, const Vector& x, const char* who) {
  if (static_cast<std::size_t>(x.size()) != h.num_nodes())
    fail(ErrorKind::invalid_argument, std::string(who) + ": signal length does not match the node count");
}

// Smallest-index maximizer and minimizer.
std::pair<std::size_t, std::size_t> extremes(const NodeSet& e, const Vector& x) {
  std::size_t hi = e[0], lo = e[0];
  for (std::size_t i : e) {
    const auto k = static_cast<Eigen::Index>(i);
    if (x(k) > x(static_cast<Eigen::Index>(hi))) hi = i;
    if (x(k) < x(static_cast<Eigen::Index>(lo))) lo = i;
  }
  return {hi, lo};
}

}  // namespace

double energy(const Hypergraph& h, const Vector& x) {
  check_signal(h, x, "energy");
  double q = 0.0;
  for (const auto& e : h.edges()) {
    const auto [hi, lo] = extremes(e, x);
    const double d = x(static_cast<Eigen::Index>(hi)) - x(static_cast<Eigen::Index>(lo));
    q += d * d;
  }
  return q;
}

Vector hypergraph_laplacian(const Hypergraph& h, const Vector& x) {
  check_signal(h, x, "hypergraph_laplacian");
  Vector out = Vector::Zero(x.size());
  for (const auto& e : h.edges()) {
    const auto [hi, lo] = extremes(e, x);
    const double d = x(static_cast<Eigen::Index>(hi)) - x(static_cast<Eigen::Index>(lo));
    if (d == 0.0) continue;
    out(static_cast<Eigen::Index>(hi)) += d;
    out(static_cast<Eigen::Index>(lo)) -= d;
  }
  return out;
}

Trajectory diffuse(const Hypergraph& h, const Vector& x0, std::size_t steps, double step_size) {
  check_signal(h, x0, "diffuse");
  if (!(step_size > 0.0)) fail(ErrorKind::invalid_argument, "diffuse: step size must be positive");
  if (!x0.allFinite()) fail(ErrorKind::numerical, "diffuse: non-finite initial state");
  Trajectory t;
  t.states.reserve(steps + 1);
  t.states.push_back(x0);
  t.energies.push_back(energy(h, x0));
  for (std::size_t k = 1; k <= steps; ++k) {
    Vector next = t.states.back() - step_size * hypergraph_laplacian(h, t.states.back());
    if (!next.allFinite()) fail(ErrorKind::numerical, "diffuse: non-finite state at step " + std::to_string(k));
    const double q = energy(h, next);
    if (q > t.energies.back() && !t.energy_increased) {
      t.energy_increased = true;
      t.first_increase = k;
    }
    t.states.push_back(std::move(next));
    t.energies.push_back(q);
  }
  return t;
}

std::vector<NodeSet> maximal_cliques(const std::vector<std::vector<std::size_t>>& neighbors) {
  std::vector<NodeSet> cliques;
  NodeSet r;
  auto intersect = [](const NodeSet& a, const NodeSet& b) {
    NodeSet out;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
  };
  // p, x sorted ascending.
  auto expand = [&](auto&& self, NodeSet p, NodeSet x) -> void {
    if (p.empty()) {
      if (x.empty() && r.size() >= 2) {
        NodeSet c = r;
        std::sort(c.begin(), c.end());
        cliques.push_back(std::move(c));
      }
      return;
    }
    // Pivot from P u X maximizing |P cap N(u)|.
    std::size_t pivot = p[0], best = 0;
    for (const NodeSet* set : {&p, &x})
      for (std::size_t u : *set) {
        const std::size_t c = intersect(p, neighbors[u]).size();
        if (c > best || (c == best && u < pivot)) {
          best = c;
          pivot = u;
        }
      }
    NodeSet candidates;
    std::set_difference(p.begin(), p.end(), neighbors[pivot].begin(), neighbors[pivot].end(),
                        std::back_inserter(candidates));
    for (std::size_t v : candidates) {
      r.push_back(v);
      self(self, intersect(p, neighbors[v]), intersect(x, neighbors[v]));
      r.pop_back();
      p.erase(std::lower_bound(p.begin(), p.end(), v));
      x.insert(std::lower_bound(x.begin(), x.end(), v), v);
    }
  };
  NodeSet all(neighbors.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  expand(expand, all, {});
  std::sort(cliques.begin(), cliques.end());
  return cliques;
}

GeometricHypergraph vietoris_rips(std::vector<kernels::Point3> points, double radius) {
  if (!(radius >= 0.0)) fail(ErrorKind::invalid_argument, "vietoris_rips: radius must be nonnegative");
  const auto full = kernels::proximity_graph(points, radius);
  std::vector<std::size_t> keep, relabel(points.size(), 0);
  for (std::size_t i = 0; i < points.size(); ++i)
    if (!full[i].empty()) {
      relabel[i] = keep.size();
      keep.push_back(i);
    }
  if (keep.empty()) fail(ErrorKind::invalid_argument, "vietoris_rips: no hyperedges at radius " + std::to_string(radius));
  std::vector<std::vector<std::size_t>> adj(keep.size());
  std::vector<kernels::Point3> kept(keep.size());
  for (std::size_t a = 0; a < keep.size(); ++a) {
    kept[a] = points[keep[a]];
    for (std::size_t j : full[keep[a]]) adj[a].push_back(relabel[j]);
  }
  auto cliques = maximal_cliques(adj);
  return GeometricHypergraph{std::move(kept), std::move(keep), radius, Hypergraph(adj.size(), std::move(cliques))};
}

std::vector<kernels::Point3> sample_torus(std::size_t n_points, std::uint64_t seed, TorusParams torus) {
  if (!(torus.major > torus.minor && torus.minor > 0.0))
    fail(ErrorKind::invalid_argument, "sample_torus: need major > minor > 0");
  Rng rng(seed);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<kernels::Point3> out;
  out.reserve(n_points);
  while (out.size() < n_points) {
    const double theta = angle(rng);
    const double accept = unit(rng);
    const double phi = angle(rng);
    if (accept * (torus.major + torus.minor) > torus.major + torus.minor * std::cos(theta)) continue;
    const double ring = torus.major + torus.minor * std::cos(theta);
    out.push_back({ring * std::cos(phi), ring * std::sin(phi), torus.minor * std::sin(theta)});
  }
  return out;
}

GeometricHypergraph sample_torus_vr(std::size_t n_points, double radius, std::uint64_t seed, TorusParams torus) {
  GeometricHypergraph g = vietoris_rips(sample_torus(n_points, seed, torus), radius);
  if (g.hypergraph.num_edges() < 10)
    fail(ErrorKind::invalid_argument, "sample_torus_vr: " + std::to_string(g.hypergraph.num_edges()) +
                                          " hyperedges, at least 10 needed to pick sources");
  return g;
}

LabeledDataset generate_dataset(const Hypergraph& h, std::uint64_t seed, const DatasetParams& p) {
  if (h.num_edges() < p.num_sources)
    fail(ErrorKind::invalid_argument, "generate_dataset: " + std::to_string(h.num_edges()) +
                                          " hyperedges, fewer than the " + std::to_string(p.num_sources) +
                                          " sources");
  if (p.num_sources == 0) fail(ErrorKind::invalid_argument, "generate_dataset: need at least one source");
  if (!(p.noise_sd >= 0.0)) fail(ErrorKind::invalid_argument, "generate_dataset: noise sd must be nonnegative");
  Rng rng(seed);
  LabeledDataset d;
  d.seed = seed;
  d.num_nodes = h.num_nodes();
  d.num_edges = h.num_edges();
  d.meta = {p.t_max, p.noise_sd, p.step_size, {}};

  std::vector<std::size_t> pool(h.num_edges());
  for (std::size_t j = 0; j < pool.size(); ++j) pool[j] = j;
  std::sample(pool.begin(), pool.end(), std::back_inserter(d.meta.sources), static_cast<std::ptrdiff_t>(p.num_sources),
              rng);
  std::shuffle(d.meta.sources.begin(), d.meta.sources.end(), rng);

  const auto n = static_cast<Eigen::Index>(h.num_nodes());
  std::normal_distribution<double> noise(0.0, 1.0);
  std::vector<Trajectory> traj;
  for (std::size_t src : d.meta.sources) {
    Vector x0 = Vector::Zero(n);
    for (std::size_t i : h.edge(src)) x0(static_cast<Eigen::Index>(i)) = 1.0;
    for (Eigen::Index i = 0; i < n; ++i) x0(i) += p.noise_sd * noise(rng);
    traj.push_back(diffuse(h, x0, p.t_max, p.step_size));
  }

  std::uniform_int_distribution<std::size_t> pick_source(0, p.num_sources - 1);
  std::uniform_int_distribution<std::size_t> pick_time(0, p.t_max);
  const std::size_t total = p.n_train + p.n_test;
  d.samples.reserve(total);
  for (std::size_t s = 0; s < total; ++s) {
    const std::size_t label = pick_source(rng);
    const std::size_t t = pick_time(rng);
    Vector x = traj[label].states[t];
    for (Eigen::Index i = 0; i < n; ++i) x(i) += p.noise_sd * noise(rng);
    d.samples.push_back({std::move(x), static_cast<int>(label), static_cast<int>(t)});
    (s < p.n_train ? d.train : d.test).push_back(s);
  }
  return d;
}

}  // namespace hgsp
