#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "besovcap/point_cloud.hpp"

namespace besovcap {

/// Sampled homeomorphism: a bijective pairing between two equal-size clouds.
struct SampledMap {
  PointCloud domain;
  PointCloud codomain;
  std::vector<int> pairing;  // domain index -> codomain index

  void validate() const;
  SampledMap inverse() const;
};

SampledMap make_identity_map(const PointCloud& cloud);
/// (interval, |.|) -> (interval, |.|^gamma), index pairing.
SampledMap make_snowflake_identity_map(int k, double gamma);
/// Interval mapped by t -> t (left half) / t -> 1/2 + (t-1/2)^2 (right half),
/// rescaled; the inverse has unbounded distortion at the kink.
SampledMap make_kink_map(int k);
SampledMap make_kink_inverse_map(int k);

enum class TripleMode { automatic, exhaustive, sampled };

/// Empirical weak-quasisymmetry constant: max over admissible triples
/// (d_Z(x,z) <= d_Z(x,y), diam{x,y,z} <= rho) of the image distance ratio.
/// Exhaustive for |Z| <= 200 under `automatic`, else a seeded sample of
/// `triple_budget` triples.
double weak_qs_constant(const SampledMap& map, long triple_budget, double rho,
                        std::uint64_t seed = 99101, TripleMode mode = TripleMode::automatic);

/// Monotone gauge: power law scale*t^exponent, or a tabulated monotone
/// function with linear interpolation.
struct Gauge {
  enum class Kind { power, table };
  Kind kind = Kind::power;
  double scale = 1.0;
  double exponent = 1.0;
  std::vector<double> ts, vs;

  double eval(double t) const;
  void validate() const;
};

struct GaugeParams {
  Gauge eta;
  double kappa = 1.0;
  double r0 = 1.0;
  double diamZ = 0.0;
  double diamW = 0.0;
  double C_L = 2.0;
};

/// Promotion of a uniformly-local gauge to a global one: the pointwise max
///   max{ eta(t), (diamW/kappa) eta(t), (diamW/kappa) eta((2 diamZ/r0) t),
///        (diamW/(kappa eta(r0/(2 diamZ)))) eta(t) }.
struct PromotedGauge {
  Gauge base;
  double plain_factor = 1.0;   // diamW/kappa
  double arg_scale = 1.0;      // 2 diamZ / r0
  double denom_factor = 1.0;   // diamW / (kappa * eta(r0/(2 diamZ)))

  double eval(double t) const;
};

PromotedGauge promote_gauge(const GaugeParams& params);

struct MorphismRow {
  int index = 0;
  double energy_pullback = 0.0;
  double energy_f = 0.0;
  double ratio = 0.0;
};

struct MorphismReport {
  std::vector<MorphismRow> rows;
  double sup = 0.0;
  std::vector<int> skipped_constant;  // zero-energy members, excluded with notice
};

/// Ratios ||f o phi||^p_{B(Z)} / ||f||^p_{B(W)} over a family of test
/// functions on W, pulled back through the pairing.
MorphismReport besov_morphism_norm(const SampledMap& map,
                                   const std::vector<std::vector<double>>& family,
                                   double theta_Z, double theta_W, double p);

/// Q/p with the analytic dimension when the generator recorded one, else the
/// Ahlfors estimate.
double cloud_dimension(const PointCloud& cloud);
double sharp_theta(const PointCloud& cloud, double p);

struct DetectorOptions {
  int n_configs = 8;
  std::uint64_t seed = 4242;
  double C_L = 2.0;
  double tol = 1e-8;
};

struct DetectorRow {
  int x = 0, y = 0, z = 0;
  double r = 0.0, R = 0.0;  // domain distances d(x,y) <= d(x,z)
  double L = 0.0, l = 0.0;  // image distances
  double measured_ratio = 0.0;  // L/l
  double cap_annulus_w = 0.0;
  double cap_chains_z = 0.0;
  double probe = 0.0;          // cap_chains_z / cap_annulus_w
  double implied_pm1 = 0.0;    // capacity-implied distortion, beta_p = 1-p reading
  double implied_p = 0.0;      // beta_p = -p reading
  double violation = 0.0;      // measured / implied: > 1 certifies a morphism break
  std::string status;
};

struct DetectorReport {
  std::vector<DetectorRow> rows;
  double max_measured_ratio = 0.0;
  double max_implied_pm1 = 0.0;
  double max_implied_p = 0.0;
  double max_probe = 0.0;
  double max_violation = 0.0;
};

/// Capacity-distortion probe: for seeded configurations (x,y,z), compare the
/// Besov capacity of the image annulus condenser against the capacity of the
/// pulled-back chain condenser, and convert the ratio into an implied bound
/// on the distortion L/l (both exponent readings reported). Requires
/// theta_Z * p to equal the domain dimension to 1e-9.
DetectorReport qs_capacity_detector(const SampledMap& map, double theta_Z, double theta_W,
                                    double p, const DetectorOptions& opts = {});

enum class QsVerdict { consistent_with_qs, non_qs_trend, inconclusive };

/// Trend rule over refinement levels: flag non-QS only when H_hat diverges
/// (final/initial >= 2); call it consistent only when the sequence stays flat.
QsVerdict classify_trend(const std::vector<double>& h_per_level);
std::string to_string(QsVerdict verdict);

}  // namespace besovcap
