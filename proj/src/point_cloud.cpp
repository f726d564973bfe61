#include "besovcap/point_cloud.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "besovcap/util.hpp"

namespace besovcap {

double PointCloud::distance(int i, int j) const {
  if (i == j) return 0.0;
  if (kind == MetricKind::explicit_matrix)
    return dist[static_cast<std::size_t>(i) * weights.size() + j];
  const auto& a = points[i];
  const auto& b = points[j];
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    const double d = a[k] - b[k];
    s += d * d;
  }
  const double e = std::sqrt(s);
  return kind == MetricKind::snowflake ? std::pow(e, gamma) : e;
}

double PointCloud::total_mass() const {
  double s = 0.0;
  for (double w : weights) s += w;
  return s;
}

void PointCloud::finalize() {
  const int n = size();
  if (n < 2) throw std::invalid_argument("PointCloud: need at least two points");
  if (kind != MetricKind::explicit_matrix && static_cast<int>(points.size()) != n)
    throw std::invalid_argument("PointCloud: points/weights size mismatch");
  if (kind == MetricKind::explicit_matrix &&
      dist.size() != static_cast<std::size_t>(n) * n)
    throw std::invalid_argument("PointCloud: distance matrix size mismatch");
  if (kind == MetricKind::snowflake && !(gamma > 0.0 && gamma <= 1.0))
    throw std::invalid_argument("PointCloud: snowflake exponent must lie in (0,1]");
  for (double w : weights)
    if (!(w > 0.0) || !std::isfinite(w))
      throw std::invalid_argument("PointCloud: weights must be strictly positive and finite");

  double dmax = 0.0;
  double gap = std::numeric_limits<double>::infinity();
  double worst_nn = 0.0;
  for (int i = 0; i < n; ++i) {
    double nn = std::numeric_limits<double>::infinity();
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      const double d = distance(i, j);
      dmax = std::max(dmax, d);
      nn = std::min(nn, d);
    }
    gap = std::min(gap, nn);
    worst_nn = std::max(worst_nn, nn);
  }
  if (!(gap > 0.0))
    throw std::invalid_argument("PointCloud: coincident points");
  if (!(dmax > 0.0 && dmax < 1.0))
    throw std::invalid_argument("PointCloud: diameter must lie in (0,1)");
  diam = dmax;
  min_gap = gap;
  mesh = worst_nn;
}

std::vector<int> ball_members(const PointCloud& cloud, const BallQuery& q) {
  const int n = cloud.size();
  if (q.center < 0 || q.center >= n)
    throw std::invalid_argument("ball_members: center index out of range");
  if (!(q.radius > 0.0) || q.radius > 2.0 * cloud.diam + 1e-15)
    throw std::invalid_argument("ball_members: radius must lie in (0, 2*diam]");
  // closed balls absorb last-ulp rounding so exact-tie members stay inside
  const double closed_limit = q.radius * (1.0 + 1e-12);
  std::vector<int> out;
  for (int i = 0; i < n; ++i) {
    const double d = cloud.distance(q.center, i);
    if (q.closed ? d <= closed_limit : d < q.radius) out.push_back(i);
  }
  return out;
}

double ball_measure(const PointCloud& cloud, const BallQuery& q) {
  double s = 0.0;
  for (int i : ball_members(cloud, q)) s += cloud.weights[i];
  return s;
}

double corrected_ball_measure(const PointCloud& cloud, int center, double r) {
  const double limit = r * (1.0 + 1e-12);
  double total = 0.0, dmax = 0.0;
  for (int i = 0; i < cloud.size(); ++i) {
    const double d = cloud.distance(center, i);
    if (d <= limit) {
      total += cloud.weights[i];
      dmax = std::max(dmax, d);
    }
  }
  if (dmax == 0.0) return 0.5 * cloud.weights[center];
  double shell = 0.0;
  for (int i = 0; i < cloud.size(); ++i) {
    const double d = cloud.distance(center, i);
    if (d <= limit && d >= dmax * (1.0 - 1e-9)) shell += cloud.weights[i];
  }
  return total - 0.5 * shell;
}

int medoid_index(const PointCloud& cloud) {
  const int n = cloud.size();
  int best = 0;
  double best_ecc = std::numeric_limits<double>::infinity();
  for (int i = 0; i < n; ++i) {
    double ecc = 0.0;
    for (int j = 0; j < n; ++j) ecc = std::max(ecc, cloud.distance(i, j));
    if (ecc < best_ecc) {
      best_ecc = ecc;
      best = i;
    }
  }
  return best;
}

void validate_metric(const PointCloud& cloud, int n_triples, std::uint64_t seed) {
  const int n = cloud.size();
  SplitMix64 rng(seed);
  for (int t = 0; t < n_triples; ++t) {
    const int i = static_cast<int>(rng.next_below(n));
    const int j = static_cast<int>(rng.next_below(n));
    const int k = static_cast<int>(rng.next_below(n));
    const double dij = cloud.distance(i, j);
    const double dji = cloud.distance(j, i);
    if (dij != dji) throw std::invalid_argument("metric: symmetry violated");
    if ((i == j) != (dij == 0.0))
      throw std::invalid_argument("metric: d(x,y)=0 iff x=y violated");
    const double dik = cloud.distance(i, k);
    const double dkj = cloud.distance(k, j);
    if (dij > dik + dkj + 1e-12 * (1.0 + dij))
      throw std::invalid_argument("metric: triangle inequality violated");
  }
}

}  // namespace besovcap
