#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "besovcap/point_cloud.hpp"

namespace besovcap {

struct AhlforsOptions {
  int min_radii = 5;  // flag the estimate when fewer usable dyadic radii remain
  int n_centers = 32;
  std::uint64_t seed = 20240901;
};

struct AhlforsEstimate {
  double q_hat = 0.0;
  double residual = 0.0;
  int n_radii = 0;
  int n_centers = 0;
  bool flagged = false;
  std::string flag_reason;
};

/// Least-squares slope of log(ball measure) against log(radius) over dyadic
/// radii and seeded random centers. A regression over too few points or
/// scales, or one with a poor fit, is flagged rather than returned silently.
AhlforsEstimate estimate_ahlfors_Q(const PointCloud& cloud, const AhlforsOptions& opts = {});

}  // namespace besovcap
