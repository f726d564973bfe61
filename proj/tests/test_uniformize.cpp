#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

#include "besovcap/filling.hpp"
#include "besovcap/generators.hpp"
#include "besovcap/uniformize.hpp"

using namespace besovcap;

namespace {

// Simpson quadrature of the within-edge density profile; independent route
// to the closed-form edge lengths.
double simpson(const std::function<double(double)>& f, int panels) {
  double acc = f(0.0) + f(1.0);
  for (int i = 1; i < panels; ++i) acc += (i % 2 ? 4.0 : 2.0) * f(i / double(panels));
  return acc / (3.0 * panels);
}

UniformizedGraph small_filling(const PointCloud& cloud, double p, double theta, int depth) {
  const NetHierarchy nets = build_nets(cloud, 2.0, depth);
  const FillingGraph g = build_graph(cloud, nets, 1.5);
  return uniformize(g, make_params(2.0, p, theta), cloud);
}

// exhaustive minimum over all simple paths; desk-size graphs only
double all_paths_distance(const UniformizedGraph& ug, int from, int to) {
  const auto& g = ug.base;
  std::vector<char> used(g.vertices.size(), 0);
  double best = 1e300;
  std::function<void(int, double)> walk = [&](int v, double len) {
    if (len >= best) return;
    if (v == to) {
      best = len;
      return;
    }
    used[v] = 1;
    const auto nbrs = g.neighbors(v);
    const auto eids = g.incident_edges(v);
    for (std::size_t k = 0; k < nbrs.size(); ++k)
      if (!used[nbrs[k]]) walk(nbrs[k], len + ug.edge_lengths[eids[k]]);
    used[v] = 0;
  };
  walk(from, 0.0);
  return best;
}

}  // namespace

TEST_CASE("parameter bundle ties theta, beta, epsilon and p together") {
  const UniformParams params = make_params(2.0, 2.0, 0.5);
  CHECK(params.epsilon == doctest::Approx(std::log(2.0)));
  CHECK(params.beta == doctest::Approx(std::log(2.0)));  // eps * p * (1 - theta)
  CHECK_NOTHROW(validate(params));

  const UniformParams from_beta = params_from_beta(2.0, 2.0, std::log(2.0));
  CHECK(from_beta.theta == doctest::Approx(0.5));

  UniformParams broken = params;
  broken.theta = 0.7;
  CHECK_THROWS_AS(validate(broken), std::invalid_argument);
  CHECK_THROWS_AS(params_from_beta(2.0, 2.0, -1.0), std::invalid_argument);
  CHECK_THROWS_AS(make_params(2.0, 2.0, 1.5), std::invalid_argument);
}

TEST_CASE("edge lengths match the within-edge quadrature") {
  for (double alpha : {1.3, 2.0, 3.0}) {
    const double eps = std::log(alpha);
    for (int level : {0, 1, 3}) {
      const double vert = simpson([&](double t) { return std::exp(-eps * (level + t)); }, 2000);
      CHECK(vertical_edge_length(eps, level) == doctest::Approx(vert).epsilon(1e-10));
      const double horiz = simpson(
          [&](double t) { return std::exp(-eps * (level + std::min(t, 1.0 - t))); }, 2000);
      CHECK(horizontal_edge_length(eps, level) == doctest::Approx(horiz).epsilon(1e-10));
      CHECK(vertical_edge_length(eps, level) > 0.0);
      CHECK(vertical_edge_length(eps, level) <= 1.0);
      CHECK(horizontal_edge_length(eps, level) <= 1.0);
    }
  }
  // alpha = 2, vertical edge from level 1: 0.5 * 0.5 / log 2
  CHECK(vertical_edge_length(std::log(2.0), 1) == doctest::Approx(0.36067376).epsilon(1e-6));
}

TEST_CASE("lifted masses") {
  const PointCloud cloud = gen_interval(4);
  const UniformizedGraph ug = small_filling(cloud, 2.0, 0.5, 4);
  const auto& g = ug.base;

  // root ball has radius 1 > diam, so it carries the total mass
  CHECK(ug.mu_plus[g.root] == doctest::Approx(cloud.total_mass()));
  CHECK(ug.mu_beta[g.root] == doctest::Approx(ug.mu_plus[g.root]));

  for (std::size_t v = 0; v < g.vertices.size(); ++v) {
    const auto [lvl, pt] = g.vertices[v];
    CHECK(ug.mu_beta[v] ==
          doctest::Approx(std::exp(-ug.params.beta * lvl) * ug.mu_plus[v]));
    if (lvl > 0) {
      CHECK(ug.mu_plus[v] ==
            doctest::Approx(ball_measure(cloud, {pt, std::pow(2.0, -lvl), true})));
    }
  }
}

TEST_CASE("per-level mass totals decay geometrically within a band") {
  const PointCloud cloud = gen_cantor(6);
  const UniformizedGraph ug = small_filling(cloud, 2.0, 0.5, default_depth(cloud, 2.0));
  std::vector<double> level_total(ug.base.depth + 1, 0.0);
  for (std::size_t v = 0; v < ug.base.vertices.size(); ++v)
    level_total[ug.base.vertices[v].level] += ug.mu_beta[v];
  double lo = 1e300, hi = 0.0;
  for (int n = 0; n <= ug.base.depth; ++n) {
    const double normalized = level_total[n] / std::exp(-ug.params.beta * n);
    lo = std::min(lo, normalized);
    hi = std::max(hi, normalized);
    CHECK(normalized >= cloud.total_mass() - 1e-12);  // net balls cover Z
  }
  CHECK(hi / lo <= 16.0);  // doubling overlap bound
  double total = 0.0;
  for (double t : level_total) total += t;
  CHECK(std::isfinite(total));
}

TEST_CASE("d_eps is a shortest-path metric and matches the path oracle") {
  const PointCloud cloud = gen_interval(3);
  const UniformizedGraph ug = small_filling(cloud, 2.0, 0.5, 3);
  const int nv = static_cast<int>(ug.base.vertices.size());

  for (int v = 0; v < nv; ++v) CHECK(d_eps(ug, v, v) == 0.0);

  // adjacency is an upper bound via the one-edge path
  for (std::size_t e = 0; e < ug.base.edges.size(); ++e) {
    const auto [v, w] = ug.base.edges[e];
    CHECK(d_eps(ug, v, w) <= ug.edge_lengths[e] + 1e-15);
  }

  // exhaustive path oracle on the tiny graph
  for (int v = 0; v < nv; v += 3)
    for (int w = 0; w < nv; w += 2) {
      const double direct = d_eps(ug, v, w);
      const double oracle = v == w ? 0.0 : all_paths_distance(ug, v, w);
      CHECK(direct == doctest::Approx(oracle).epsilon(1e-12));
    }

  // symmetry and triangle inequality
  const auto from0 = dijkstra(ug, 0);
  for (int v = 0; v < nv; ++v) {
    CHECK(d_eps(ug, v, 0) == doctest::Approx(from0[v]));
    for (int w = 0; w < nv; w += 2)
      CHECK(from0[w] <= from0[v] + d_eps(ug, v, w) + 1e-12);
  }
}

TEST_CASE("root-to-depth-2 distance along the vertical chain") {
  const PointCloud cloud = gen_interval(3);
  const UniformizedGraph ug = small_filling(cloud, 2.0, 0.5, 3);
  const auto& g = ug.base;
  // vertex (2, root point): the two vertical edges give 0.72135 + 0.36068
  int target = -1;
  for (std::size_t v = 0; v < g.vertices.size(); ++v)
    if (g.vertices[v].level == 2 && g.vertices[v].point == g.vertices[g.root].point)
      target = static_cast<int>(v);
  REQUIRE(target >= 0);
  const double chain = vertical_edge_length(ug.params.epsilon, 0) +
                       vertical_edge_length(ug.params.epsilon, 1);
  CHECK(chain == doctest::Approx(1.08202129).epsilon(1e-6));
  const double dist = d_eps(ug, g.root, target);
  CHECK(dist <= chain + 1e-15);
  CHECK(dist == doctest::Approx(all_paths_distance(ug, g.root, target)).epsilon(1e-12));
}

TEST_CASE("boundary balls") {
  const PointCloud cloud = gen_interval(4);
  const int depth = 4;
  const UniformizedGraph ug = small_filling(cloud, 2.0, 0.5, depth);
  const auto& g = ug.base;

  // r = diam excludes the root (its scale 1 exceeds 0.9)
  const auto wide = boundary_ball(ug, cloud, 0, cloud.diam);
  for (int v : wide) CHECK(g.vertices[v].level >= 1);
  CHECK_FALSE(wide.empty());

  // r below the deepest resolution: empty
  CHECK(boundary_ball(ug, cloud, 0, std::pow(2.0, -depth) / 2.0).empty());

  // r slightly above alpha^{-N}: contains the boundary representative
  const double r = std::pow(2.0, -depth) * 1.10;
  const auto tight = boundary_ball(ug, cloud, 3, r);
  bool has_rep = false;
  for (int v : tight)
    if (v == ug.boundary_reps[3]) has_rep = true;
  CHECK(has_rep);

  CHECK_THROWS_AS(boundary_ball(ug, cloud, 0, 2.0), std::invalid_argument);
}

TEST_CASE("surrogate and graph-exact boundary balls are comparable") {
  const PointCloud cloud = gen_interval(4);
  const UniformizedGraph ug = small_filling(cloud, 2.0, 0.5, 4);
  const double comparability = 6.0;
  for (int z : {0, 8, 16}) {
    for (double r : {0.1, 0.2, 0.45}) {
      const auto surrogate = boundary_ball(ug, cloud, z, r);
      const auto exact_wide =
          boundary_ball(ug, cloud, z, std::min(comparability * r, cloud.diam),
                        BoundaryBallMode::graph_exact);
      for (int v : surrogate)
        CHECK(std::find(exact_wide.begin(), exact_wide.end(), v) != exact_wide.end());
      const auto exact = boundary_ball(ug, cloud, z, r, BoundaryBallMode::graph_exact);
      const auto surrogate_wide =
          boundary_ball(ug, cloud, z, std::min(comparability * r, cloud.diam));
      for (int v : exact)
        CHECK(std::find(surrogate_wide.begin(), surrogate_wide.end(), v) !=
              surrogate_wide.end());
    }
  }
}

TEST_CASE("boundary representatives realize the e^{-eps n} scale") {
  const PointCloud cloud = gen_interval(5);
  const int depth = default_depth(cloud, 2.0);
  const UniformizedGraph ug = small_filling(cloud, 2.0, 0.5, depth);
  const auto& g = ug.base;
  const double floor_scale = std::pow(2.0, -depth);
  double lo = 1e300, hi = 0.0;
  for (std::size_t v = 0; v < g.vertices.size(); ++v) {
    const auto [lvl, pt] = g.vertices[v];
    const double dist = d_eps(ug, static_cast<int>(v), ug.boundary_reps[pt]);
    const double normalized = (dist + floor_scale) / std::exp(-ug.params.epsilon * lvl);
    lo = std::min(lo, normalized);
    hi = std::max(hi, normalized);
  }
  CHECK(lo > 0.0);
  CHECK(hi / lo <= 8.0);  // finite-scale surrogate for delta_eps(v) ~ e^{-eps n}
}

TEST_CASE("codimension exponent fit recovers beta/epsilon") {
  const PointCloud cloud = gen_interval(8);
  const NetHierarchy nets = build_nets(cloud, 2.0, default_depth(cloud, 2.0) + 4);
  const FillingGraph g = build_graph(cloud, nets, 1.5);

  for (double ratio : {1.0, 2.0}) {
    const UniformParams params = params_from_beta(2.0, 4.0, ratio * std::log(2.0));
    const UniformizedGraph ug = uniformize(g, params, cloud);
    const CodimFit fit = codim_exponent_fit(ug, cloud);
    REQUIRE_FALSE(fit.flagged);
    CHECK(fit.slope == doctest::Approx(ratio).epsilon(0.15));
  }

  // starved of radii: flagged with no slope
  const UniformizedGraph ug = uniformize(g, params_from_beta(2.0, 4.0, std::log(2.0)), cloud);
  CodimFitOptions opts;
  opts.level_margin = 100;
  const CodimFit starved = codim_exponent_fit(ug, cloud, opts);
  CHECK(starved.flagged);
  CHECK(std::isnan(starved.slope));
}
