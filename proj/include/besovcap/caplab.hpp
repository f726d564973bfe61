#pragma once

#include <string>
#include <utility>
#include <vector>

#include "besovcap/energy.hpp"
#include "besovcap/point_cloud.hpp"
#include "besovcap/uniformize.hpp"

namespace besovcap {

/// Annulus condenser (closed ball(x0,r), Z minus ball(x0,R)).
struct AnnulusSpec {
  int x0 = 0;
  double r = 0.0;
  double R = 0.0;
};

void validate(const AnnulusSpec& spec, const PointCloud& cloud);

struct AnnulusBound {
  double value = 0.0;
  int case_tag = 0;
};

/// Case 1 (p theta > Q): R^{Q - theta p}. Case 2 (p theta = Q, within 1e-9):
/// log(R/r)^{1-p}. Case 3 (p theta < Q): r^{Q - theta p}.
AnnulusBound predicted_annulus_bound(double r, double R, double p, double theta, double Q);
int annulus_case(double p, double theta, double Q);

enum class CutoffVariant { caseR, caser };

/// caseR: (1 - 2 dist(x, B(x0,R/2)) / R)_+ ; caser: (1 - dist(x, B(x0,r)) / r)_+.
/// Set distances use the closed sampled ball so the cutoff stays feasible for
/// the discrete condenser.
std::vector<double> lipschitz_cutoff(const PointCloud& cloud, const AnnulusSpec& spec,
                                     CutoffVariant variant);

/// min{ (log(R/d(x,x0)) / log(R/r))_+ , 1 }, with value 1 at x0 itself.
std::vector<double> log_cutoff(const PointCloud& cloud, const AnnulusSpec& spec);

/// Pointwise upper-gradient bound of the log cutoff at vertex centers:
/// (1/log(R/r)) (1/d(x,x0)) on the annulus, zero outside.
std::vector<double> log_cutoff_gradient_bound(const UniformizedGraph& ug,
                                              const PointCloud& cloud,
                                              const AnnulusSpec& spec);

struct ScalingRow {
  double r = 0.0;
  double R = 0.0;
  double capacity = 0.0;
  double predicted = 0.0;
  double testfn_energy = 0.0;
  double gradbound_energy = 0.0;  // case 2 with a graph only, else NaN
  int case_tag = 0;
  std::string status;
};

struct ScalingReport {
  std::vector<ScalingRow> rows;
  int case_tag = 0;
  double p = 0.0, theta = 0.0, Q = 0.0;
  double fitted_exponent = 0.0;
  double target_exponent = 0.0;
  double alt_target_exponent = 0.0;  // case 2: the -p reading; 0 otherwise
  bool alt_matches_better = false;
  double residual = 0.0;
  std::string fit_variable;
};

/// Runs the annulus condenser over the (r,R) grid: capacity, predicted bound
/// and the case-appropriate test-function energy per grid point, then the
/// exponent regression (case 2 against log log(R/r), cases 1/3 against
/// log R / log r). The grid must span a factor >= 8 in the regressed variable.
ScalingReport annulus_experiment(const PointCloud& cloud, const UniformizedGraph* ug, int x0,
                                 const std::vector<std::pair<double, double>>& grid, double p,
                                 double theta, double tol = 1e-8);

struct ContentEstimate {
  double s = 0.0;
  double value = 0.0;
  std::vector<std::pair<int, double>> cover;  // (center index, radius)
  std::string method;
};

/// Greedy upper estimate of the Hausdorff content H^s_tau of the sampled set
/// E: best of a per-scale greedy ball cover ladder and a one-ball-per-
/// mesh-component cover. Cluster charges are padded by the sample mesh so a
/// cover cannot collapse below the resolution the sample can testify to.
ContentEstimate hausdorff_content(const PointCloud& cloud, const std::vector<int>& E, double s,
                                  double tau);

/// min(contentE, contentF) / R^{s - Q + theta p}; requires p > max(1, Q-s)
/// and (Q-s)/p < theta < 1.
double loewner_lower_bound(double contentE, double contentF, double R, double s, double theta,
                           double p, double Q);

struct LoewnerRow {
  double R = 0.0;
  double contentE = 0.0;
  double contentF = 0.0;
  double lower_bound = 0.0;
  double capacity = 0.0;
  double ratio = 0.0;
  std::string status;
};

struct LoewnerReport {
  std::vector<LoewnerRow> rows;
  double c_min = 0.0;  // empirical constant: smallest capacity/bound ratio
  double s = 0.0, theta = 0.0, p = 0.0;
};

struct ContinuumPair {
  std::vector<int> E;
  std::vector<int> F;
  double R = 0.0;
};

/// Capacity vs the content lower bound over pairs of sample-connected
/// continua; throws if a plate is not connected at mesh scale.
LoewnerReport loewner_experiment(const PointCloud& cloud, const std::vector<ContinuumPair>& pairs,
                                 double s, double theta, double p, double tol = 1e-8);

/// Opposite quarter-segments of the window of length R around x0
/// (one-dimensional clouds).
ContinuumPair quarter_segment_condenser(const PointCloud& cloud, int x0, double R);

/// True when the index set is connected in the mesh-adjacency graph
/// (points within 2*mesh are adjacent).
bool sample_connected(const PointCloud& cloud, const std::vector<int>& set);

}  // namespace besovcap
