#pragma once

#include "besovcap/point_cloud.hpp"

namespace besovcap {

/// 2^k + 1 equally spaced points on a segment, diameter 0.9, uniform weights.
PointCloud gen_interval(int k);

/// 2^k left endpoints of the level-k middle-thirds construction,
/// diameter 0.9, self-similar weights 2^{-k}.
PointCloud gen_cantor(int k);

/// 8^k subsquare centers of the level-k carpet, diameter 0.9, weights 8^{-k}.
/// Requires 1 <= k <= 5.
PointCloud gen_sierpinski_carpet(int k);

/// 3^k subtriangle centroids of the level-k gasket, diameter 0.9, weights 3^{-k}.
PointCloud gen_sierpinski_gasket(int k);

/// Interval samples carrying the metric d(x,y) = |x-y|^gamma, rescaled so the
/// snowflaked diameter is 0.9. Ahlfors dimension 1/gamma.
PointCloud gen_snowflake_interval(int k, double gamma);

}  // namespace besovcap
