#pragma once

#include <cstdint>
#include <vector>

#include "besovcap/filling.hpp"
#include "besovcap/point_cloud.hpp"

namespace besovcap {

/// Parameter bundle tied together by theta = 1 - beta/(epsilon*p).
struct UniformParams {
  double alpha = 2.0;
  double epsilon = 0.0;  // log(alpha)
  double beta = 0.0;
  double p = 2.0;
  double theta = 0.5;
};

/// beta derived from theta.
UniformParams make_params(double alpha, double p, double theta);
/// theta derived from beta.
UniformParams params_from_beta(double alpha, double p, double beta);
void validate(const UniformParams& params);

/// Length of the edge between levels n and n+1 under the density
/// e^{-epsilon * (distance to root)}: e^{-eps n} (1 - e^{-eps}) / eps.
double vertical_edge_length(double epsilon, int level);
/// Same-level edge at level n; the within-edge root distance follows the
/// tent profile n + min(t, 1-t): 2 e^{-eps n} (1 - e^{-eps/2}) / eps.
double horizontal_edge_length(double epsilon, int level);

struct UniformizedGraph {
  FillingGraph base;
  UniformParams params;
  std::vector<double> edge_lengths;   // per edge, positive and <= 1
  std::vector<double> mu_plus;        // per vertex: nu(closed ball (x, alpha^{-n}))
  std::vector<double> mu_beta;        // e^{-beta n} * mu_plus
  std::vector<int> boundary_reps;     // cloud index -> deepest-level vertex id
};

UniformizedGraph uniformize(const FillingGraph& graph, const UniformParams& params,
                            const PointCloud& cloud);

/// Weighted shortest-path distances from `source` over edge_lengths.
std::vector<double> dijkstra(const UniformizedGraph& ug, int source);
double d_eps(const UniformizedGraph& ug, int v, int w);

enum class BoundaryBallMode {
  surrogate,   // vertices (n,x) with max(alpha^{-n}, d_Z(x,z)) < r; O(V)
  graph_exact  // vertices with d_eps(v, boundary_rep(z)) < r; for cross-checks
};

/// Finite-scale surrogate for the uniformized ball around boundary point z.
std::vector<int> boundary_ball(const UniformizedGraph& ug, const PointCloud& cloud, int z,
                               double r, BoundaryBallMode mode = BoundaryBallMode::surrogate);

struct CodimFitOptions {
  int n_centers = 24;
  std::uint64_t seed = 7101;
  int level_margin = 1;  // required self-similar levels below each radius scale
  int min_radii = 4;
};

struct CodimFit {
  double slope = 0.0;
  double residual = 0.0;
  int n_samples = 0;
  std::vector<double> radii;
  bool flagged = false;
};

/// Regression slope of log[mu_beta(boundary ball)/nu(ball)] against log r
/// over seeded boundary centers and dyadic radii; the contract is
/// slope ~ beta/epsilon.
CodimFit codim_exponent_fit(const UniformizedGraph& ug, const PointCloud& cloud,
                            const CodimFitOptions& opts = {});

}  // namespace besovcap
