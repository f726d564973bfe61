#include "besovcap/uniformize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <stdexcept>

#include "besovcap/util.hpp"

namespace besovcap {

UniformParams make_params(double alpha, double p, double theta) {
  if (!(alpha > 1.0)) throw std::invalid_argument("make_params: alpha must exceed 1");
  if (!(p > 1.0)) throw std::invalid_argument("make_params: p must exceed 1");
  if (!(theta > 0.0 && theta < 1.0))
    throw std::invalid_argument("make_params: theta must lie in (0,1)");
  UniformParams params;
  params.alpha = alpha;
  params.epsilon = std::log(alpha);
  params.p = p;
  params.theta = theta;
  params.beta = params.epsilon * p * (1.0 - theta);
  return params;
}

UniformParams params_from_beta(double alpha, double p, double beta) {
  if (!(beta > 0.0)) throw std::invalid_argument("params_from_beta: beta must be positive");
  UniformParams params;
  params.alpha = alpha;
  params.epsilon = std::log(alpha);
  params.p = p;
  params.beta = beta;
  params.theta = 1.0 - beta / (params.epsilon * p);
  if (!(params.theta > 0.0 && params.theta < 1.0))
    throw std::invalid_argument("params_from_beta: derived theta falls outside (0,1)");
  return params;
}

void validate(const UniformParams& params) {
  if (!(params.beta > 0.0)) throw std::invalid_argument("UniformParams: beta must be positive");
  if (!(params.p > 1.0)) throw std::invalid_argument("UniformParams: p must exceed 1");
  if (std::abs(params.epsilon - std::log(params.alpha)) > 1e-12)
    throw std::invalid_argument("UniformParams: epsilon != log(alpha)");
  const double theta = 1.0 - params.beta / (params.epsilon * params.p);
  if (std::abs(theta - params.theta) > 1e-9)
    throw std::invalid_argument("UniformParams: theta = 1 - beta/(eps p) violated");
}

double vertical_edge_length(double epsilon, int level) {
  return std::exp(-epsilon * level) * (1.0 - std::exp(-epsilon)) / epsilon;
}

double horizontal_edge_length(double epsilon, int level) {
  return 2.0 * std::exp(-epsilon * level) * (1.0 - std::exp(-epsilon / 2.0)) / epsilon;
}

UniformizedGraph uniformize(const FillingGraph& graph, const UniformParams& params,
                            const PointCloud& cloud) {
  validate(params);
  if (std::abs(params.alpha - graph.alpha) > 1e-12)
    throw std::invalid_argument("uniformize: params.alpha differs from the graph's alpha");

  UniformizedGraph ug;
  ug.base = graph;
  ug.params = params;

  ug.edge_lengths.resize(graph.edges.size());
  for (std::size_t e = 0; e < graph.edges.size(); ++e) {
    const auto [u, v] = graph.edges[e];
    const int lu = graph.vertices[u].level;
    const int lv = graph.vertices[v].level;
    ug.edge_lengths[e] = (lu == lv)
                             ? horizontal_edge_length(params.epsilon, lu)
                             : vertical_edge_length(params.epsilon, std::min(lu, lv));
  }

  const int nv = static_cast<int>(graph.vertices.size());
  ug.mu_plus.resize(nv);
  ug.mu_beta.resize(nv);
  for (int v = 0; v < nv; ++v) {
    const auto [lvl, pt] = graph.vertices[v];
    const double radius = std::pow(params.alpha, -lvl);
    double mass;
    if (radius >= cloud.diam) {
      mass = cloud.total_mass();
    } else {
      mass = ball_measure(cloud, {pt, radius, true});
    }
    ug.mu_plus[v] = mass;
    ug.mu_beta[v] = std::exp(-params.beta * lvl) * mass;
  }

  // deepest-level representative of each cloud point (ties -> lowest point index)
  std::vector<int> deepest;
  for (int v = 0; v < nv; ++v)
    if (graph.vertices[v].level == graph.depth) deepest.push_back(v);
  ug.boundary_reps.resize(cloud.size());
  for (int z = 0; z < cloud.size(); ++z) {
    int best = -1;
    double best_d = std::numeric_limits<double>::infinity();
    for (int v : deepest) {
      const double d = cloud.distance(z, graph.vertices[v].point);
      if (d < best_d - 1e-15 ||
          (std::abs(d - best_d) <= 1e-15 && best >= 0 &&
           graph.vertices[v].point < graph.vertices[best].point)) {
        best_d = d;
        best = v;
      }
    }
    ug.boundary_reps[z] = best;
  }
  return ug;
}

std::vector<double> dijkstra(const UniformizedGraph& ug, int source) {
  const auto& g = ug.base;
  const int nv = static_cast<int>(g.vertices.size());
  if (source < 0 || source >= nv) throw std::invalid_argument("dijkstra: source out of range");
  std::vector<double> dist(nv, std::numeric_limits<double>::infinity());
  dist[source] = 0.0;
  using Item = std::pair<double, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<Item>> heap;
  heap.push({0.0, source});
  while (!heap.empty()) {
    const auto [d, v] = heap.top();
    heap.pop();
    if (d > dist[v]) continue;
    const auto nbrs = g.neighbors(v);
    const auto eids = g.incident_edges(v);
    for (std::size_t k = 0; k < nbrs.size(); ++k) {
      const double nd = d + ug.edge_lengths[eids[k]];
      if (nd < dist[nbrs[k]]) {
        dist[nbrs[k]] = nd;
        heap.push({nd, nbrs[k]});
      }
    }
  }
  return dist;
}

double d_eps(const UniformizedGraph& ug, int v, int w) {
  if (v == w) return 0.0;
  return dijkstra(ug, v)[w];
}

std::vector<int> boundary_ball(const UniformizedGraph& ug, const PointCloud& cloud, int z,
                               double r, BoundaryBallMode mode) {
  if (z < 0 || z >= cloud.size())
    throw std::invalid_argument("boundary_ball: cloud index out of range");
  if (!(r > 0.0 && r <= cloud.diam + 1e-15))
    throw std::invalid_argument("boundary_ball: radius must lie in (0, diam]");
  const auto& g = ug.base;
  std::vector<int> out;
  if (mode == BoundaryBallMode::graph_exact) {
    const auto dist = dijkstra(ug, ug.boundary_reps[z]);
    for (int v = 0; v < static_cast<int>(g.vertices.size()); ++v)
      if (dist[v] < r) out.push_back(v);
    return out;
  }
  for (int v = 0; v < static_cast<int>(g.vertices.size()); ++v) {
    const auto [lvl, pt] = g.vertices[v];
    const double scale = std::pow(ug.params.alpha, -lvl);
    if (std::max(scale, cloud.distance(pt, z)) < r) out.push_back(v);
  }
  return out;
}

CodimFit codim_exponent_fit(const UniformizedGraph& ug, const PointCloud& cloud,
                            const CodimFitOptions& opts) {
  const double alpha = ug.params.alpha;
  const double beta = ug.params.beta;

  // Levels below the sample resolution are net copies whose per-level sums
  // drop by the lost overlap factor; summing them as-is kinks the slope.
  // The ball mass is therefore summed over the self-similar levels only and
  // the remaining geometric tail is continued from the last such level.
  int n_eff = 0;
  while (n_eff < ug.base.depth && std::pow(alpha, -(n_eff + 1)) >= cloud.min_gap) ++n_eff;

  CodimFit fit;
  for (int j = 0;; ++j) {
    const double r = cloud.diam * std::pow(2.0, -j);
    const int floor_level =
        static_cast<int>(std::floor(std::log(1.0 / r) / std::log(alpha))) + 1;
    if (floor_level > n_eff - opts.level_margin) break;
    fit.radii.push_back(r);
  }
  if (static_cast<int>(fit.radii.size()) < opts.min_radii) {
    fit.flagged = true;
    fit.slope = std::numeric_limits<double>::quiet_NaN();
    return fit;
  }

  const std::vector<int> centers = sample_indices(cloud.size(), opts.n_centers, opts.seed);
  const double tail_factor = std::exp(-beta * (n_eff + 1)) / (1.0 - std::exp(-beta));
  std::vector<double> log_r, log_ratio;
  for (double r : fit.radii) {
    double acc = 0.0;
    int used = 0;
    for (int z : centers) {
      double mass = 0.0, last_level_plus = 0.0;
      for (std::size_t v = 0; v < ug.base.vertices.size(); ++v) {
        const auto [lvl, pt] = ug.base.vertices[v];
        if (lvl > n_eff) continue;
        if (std::max(std::pow(alpha, -lvl), cloud.distance(pt, z)) >= r) continue;
        mass += ug.mu_beta[v];
        if (lvl == n_eff) last_level_plus += ug.mu_plus[v];
      }
      mass += last_level_plus * tail_factor;
      if (mass <= 0.0) continue;
      const double nu = corrected_ball_measure(cloud, z, r);
      acc += std::log(mass / nu);
      ++used;
    }
    if (used == 0) continue;
    log_r.push_back(std::log(r));
    log_ratio.push_back(acc / used);
    fit.n_samples += used;
  }
  if (static_cast<int>(log_r.size()) < opts.min_radii) {
    fit.flagged = true;
    fit.slope = std::numeric_limits<double>::quiet_NaN();
    return fit;
  }
  const LinearFit lf = fit_line(log_r, log_ratio);
  fit.slope = lf.slope;
  fit.residual = lf.rms_residual;
  return fit;
}

}  // namespace besovcap
