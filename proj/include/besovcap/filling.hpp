#pragma once

#include <span>
#include <utility>
#include <vector>

#include "besovcap/point_cloud.hpp"

namespace besovcap {

/// Nested maximal alpha^{-n}-separated subsets A_0 subset A_1 subset ... A_N.
struct NetHierarchy {
  double alpha = 2.0;
  std::vector<std::vector<int>> levels;
  bool truncated = false;  // deepest nets exhaust the sample; deeper ones are copies

  int depth() const { return static_cast<int>(levels.size()) - 1; }
};

/// Depth at which the finest net resolves the sample: ceil(log_alpha(diam/min_gap)).
int default_depth(const PointCloud& cloud, double alpha);

/// Greedy nested nets. Candidates scan in ascending point-index order,
/// seeded from the previous level's members, so rebuilds are bit-identical.
NetHierarchy build_nets(const PointCloud& cloud, double alpha, int depth);

enum class BallRule { open, closed };

/// Hyperbolic filling graph over the net hierarchy: vertices (n, x) for
/// x in A_n, root p0 at level 0, unit-length edges by the two ball rules.
struct FillingGraph {
  struct Vertex {
    int level;
    int point;
  };

  std::vector<Vertex> vertices;
  std::vector<std::pair<int, int>> edges;
  int root = 0;
  double alpha = 2.0;
  double tau = 1.5;
  int depth = 0;

  // CSR adjacency
  std::vector<int> adj_offsets;
  std::vector<int> adj_vertices;
  std::vector<int> adj_edges;

  int degree(int v) const { return adj_offsets[v + 1] - adj_offsets[v]; }
  std::span<const int> neighbors(int v) const {
    return {adj_vertices.data() + adj_offsets[v],
            static_cast<std::size_t>(degree(v))};
  }
  std::span<const int> incident_edges(int v) const {
    return {adj_edges.data() + adj_offsets[v],
            static_cast<std::size_t>(degree(v))};
  }
};

/// Edge rule of the filling: vertices (n,x), (m,y) are neighbours when they
/// differ, |n-m| <= 1, and the balls of radii tau*alpha^{-n}, tau*alpha^{-m}
/// (n != m) resp. alpha^{-n}, alpha^{-m} (n = m) intersect. Ball intersection
/// is tested as d < r1 + r2 (open) or d <= r1 + r2 (closed).
bool edge_rule_holds(double d, int n, int m, double alpha, double tau, BallRule rule);

/// Builds the graph and checks connectivity; throws std::logic_error if the
/// result is disconnected.
FillingGraph build_graph(const PointCloud& cloud, const NetHierarchy& nets, double tau,
                         BallRule rule = BallRule::open);

int vertex_level(const FillingGraph& g, int v);

/// Unit-edge BFS distance from the root, for every vertex.
std::vector<int> bfs_depths(const FillingGraph& g);

int graph_distance_to_root(const FillingGraph& g, int v);

}  // namespace besovcap
