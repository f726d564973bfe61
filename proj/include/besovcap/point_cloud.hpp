#pragma once

#include <cstdint>
#include <vector>

namespace besovcap {

enum class MetricKind { euclidean, snowflake, explicit_matrix };

/// Finite sample of a compact metric measure space (Z, d_Z, nu).
/// Immutable after finalize(); all queries are read-only.
struct PointCloud {
  MetricKind kind = MetricKind::euclidean;
  double gamma = 1.0;  // snowflake exponent, in (0,1]
  std::vector<std::vector<double>> points;
  std::vector<double> weights;
  std::vector<double> dist;  // row-major n*n, explicit_matrix only
  double diam = 0.0;
  double min_gap = 0.0;      // smallest pairwise distance
  double mesh = 0.0;         // largest nearest-neighbour distance
  double analytic_dim = 0.0; // similarity dimension when the generator knows it, else 0

  int size() const { return static_cast<int>(weights.size()); }
  double distance(int i, int j) const;
  double total_mass() const;

  /// Computes diam/min_gap/mesh and validates the invariants:
  /// at least two points, positive weights, distinct points, diam in (0,1).
  void finalize();
};

struct BallQuery {
  int center = 0;
  double radius = 0.0;
  bool closed = true;
};

/// Indices within the ball; always contains the center.
std::vector<int> ball_members(const PointCloud& cloud, const BallQuery& q);

/// Sum of weights over ball_members.
double ball_measure(const PointCloud& cloud, const BallQuery& q);

/// Closed-ball mass minus half the outermost tie shell: a continuity
/// correction that removes the one-extra-point bias of counting on a
/// discrete sample. Used by the scaling estimators.
double corrected_ball_measure(const PointCloud& cloud, int center, double r);

/// Point minimizing the maximum distance to the rest (ties -> lowest index).
int medoid_index(const PointCloud& cloud);

/// Spot-checks symmetry, identity and the triangle inequality on seeded
/// random triples; throws std::invalid_argument on violation.
void validate_metric(const PointCloud& cloud, int n_triples, std::uint64_t seed);

}  // namespace besovcap
