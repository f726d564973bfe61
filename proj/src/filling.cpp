#include "besovcap/filling.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <stdexcept>

namespace besovcap {

int default_depth(const PointCloud& cloud, double alpha) {
  if (!(alpha > 1.0)) throw std::invalid_argument("default_depth: alpha must exceed 1");
  const double d = std::log(cloud.diam / cloud.min_gap) / std::log(alpha);
  return std::max(1, static_cast<int>(std::ceil(d)));
}

NetHierarchy build_nets(const PointCloud& cloud, double alpha, int depth) {
  if (!(alpha > 1.0)) throw std::invalid_argument("build_nets: alpha must exceed 1");
  if (depth < 1) throw std::invalid_argument("build_nets: depth must be >= 1");
  if (!(cloud.diam < 1.0)) throw std::invalid_argument("build_nets: cloud diameter must be < 1");

  const int n = cloud.size();
  NetHierarchy nets;
  nets.alpha = alpha;
  nets.levels.resize(depth + 1);

  std::vector<char> member(n, 0);
  std::vector<int> current;
  for (int lvl = 0; lvl <= depth; ++lvl) {
    const double sep = std::pow(alpha, -lvl);
    // previous members first (forced by nesting), then ascending index
    for (int i = 0; i < n; ++i) {
      if (member[i]) continue;
      bool ok = true;
      for (int m : current)
        if (cloud.distance(i, m) < sep) {
          ok = false;
          break;
        }
      if (ok) {
        current.push_back(i);
        member[i] = 1;
      }
    }
    nets.levels[lvl] = current;
  }
  nets.truncated = std::pow(alpha, -depth) < 0.5 * cloud.min_gap;
  return nets;
}

bool edge_rule_holds(double d, int n, int m, double alpha, double tau, BallRule rule) {
  if (n == m) {
    const double lim = std::pow(alpha, -n) + std::pow(alpha, -m);
    return rule == BallRule::open ? d < lim : d <= lim;
  }
  if (std::abs(n - m) > 1) return false;
  const double lim = tau * (std::pow(alpha, -n) + std::pow(alpha, -m));
  return rule == BallRule::open ? d < lim : d <= lim;
}

FillingGraph build_graph(const PointCloud& cloud, const NetHierarchy& nets, double tau,
                         BallRule rule) {
  if (!(tau > 1.0)) throw std::invalid_argument("build_graph: tau must exceed 1");
  FillingGraph g;
  g.alpha = nets.alpha;
  g.tau = tau;
  g.depth = nets.depth();
  if (nets.levels.empty() || nets.levels[0].size() != 1)
    throw std::logic_error("build_graph: level-0 net must be the single root point");

  std::vector<std::vector<int>> ids(nets.levels.size());
  for (std::size_t lvl = 0; lvl < nets.levels.size(); ++lvl) {
    ids[lvl].reserve(nets.levels[lvl].size());
    for (int pt : nets.levels[lvl]) {
      ids[lvl].push_back(static_cast<int>(g.vertices.size()));
      g.vertices.push_back({static_cast<int>(lvl), pt});
    }
  }
  g.root = ids[0][0];

  auto scan_pair = [&](int lvl_a, int lvl_b) {
    const auto& a = nets.levels[lvl_a];
    const auto& b = nets.levels[lvl_b];
    for (std::size_t i = 0; i < a.size(); ++i) {
      const std::size_t j0 = (lvl_a == lvl_b) ? i + 1 : 0;
      for (std::size_t j = j0; j < b.size(); ++j) {
        const int va = ids[lvl_a][i];
        const int vb = ids[lvl_b][j];
        if (va == vb) continue;
        const double d = cloud.distance(a[i], b[j]);
        if (edge_rule_holds(d, lvl_a, lvl_b, nets.alpha, tau, rule))
          g.edges.emplace_back(std::min(va, vb), std::max(va, vb));
      }
    }
  };
  for (int lvl = 0; lvl <= g.depth; ++lvl) {
    scan_pair(lvl, lvl);
    if (lvl < g.depth) scan_pair(lvl, lvl + 1);
  }
  std::sort(g.edges.begin(), g.edges.end());

  const int nv = static_cast<int>(g.vertices.size());
  std::vector<int> deg(nv, 0);
  for (const auto& e : g.edges) {
    ++deg[e.first];
    ++deg[e.second];
  }
  g.adj_offsets.assign(nv + 1, 0);
  for (int v = 0; v < nv; ++v) g.adj_offsets[v + 1] = g.adj_offsets[v] + deg[v];
  g.adj_vertices.resize(g.adj_offsets[nv]);
  g.adj_edges.resize(g.adj_offsets[nv]);
  std::vector<int> fill(g.adj_offsets.begin(), g.adj_offsets.end() - 1);
  for (std::size_t e = 0; e < g.edges.size(); ++e) {
    const auto [u, v] = g.edges[e];
    g.adj_vertices[fill[u]] = v;
    g.adj_edges[fill[u]++] = static_cast<int>(e);
    g.adj_vertices[fill[v]] = u;
    g.adj_edges[fill[v]++] = static_cast<int>(e);
  }

  // connectivity is an invariant of the construction; fail loudly if broken
  const auto depths = bfs_depths(g);
  for (int v = 0; v < nv; ++v)
    if (depths[v] < 0) throw std::logic_error("build_graph: filling graph is disconnected");
  return g;
}

int vertex_level(const FillingGraph& g, int v) {
  if (v < 0 || v >= static_cast<int>(g.vertices.size()))
    throw std::invalid_argument("vertex_level: vertex out of range");
  return g.vertices[v].level;
}

std::vector<int> bfs_depths(const FillingGraph& g) {
  std::vector<int> dist(g.vertices.size(), -1);
  std::deque<int> queue{g.root};
  dist[g.root] = 0;
  while (!queue.empty()) {
    const int v = queue.front();
    queue.pop_front();
    for (int w : g.neighbors(v))
      if (dist[w] < 0) {
        dist[w] = dist[v] + 1;
        queue.push_back(w);
      }
  }
  return dist;
}

int graph_distance_to_root(const FillingGraph& g, int v) {
  if (v < 0 || v >= static_cast<int>(g.vertices.size()))
    throw std::invalid_argument("graph_distance_to_root: vertex out of range");
  return bfs_depths(g)[v];
}

}  // namespace besovcap
