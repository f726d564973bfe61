#include "besovcap/generators.hpp"

#include <cmath>
#include <stdexcept>

namespace besovcap {

namespace {

void rescale_to_diam(std::vector<std::vector<double>>& pts, double target) {
  double dmax = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < pts[i].size(); ++k) {
        const double d = pts[i][k] - pts[j][k];
        s += d * d;
      }
      dmax = std::max(dmax, s);
    }
  const double scale = target / std::sqrt(dmax);
  for (auto& p : pts)
    for (auto& c : p) c *= scale;
}

void check_level(int k, int max_k, const char* who) {
  if (k < 1) throw std::invalid_argument(std::string(who) + ": level must be >= 1");
  if (k > max_k)
    throw std::length_error(std::string(who) + ": level exceeds the resource budget");
}

}  // namespace

PointCloud gen_interval(int k) {
  check_level(k, 14, "gen_interval");
  const int n = (1 << k) + 1;
  const double step = 0.9 / (1 << k);
  PointCloud cloud;
  cloud.kind = MetricKind::euclidean;
  cloud.analytic_dim = 1.0;
  cloud.points.reserve(n);
  for (int i = 0; i < n; ++i) cloud.points.push_back({i * step});
  cloud.weights.assign(n, 1.0 / n);
  cloud.finalize();
  return cloud;
}

PointCloud gen_cantor(int k) {
  check_level(k, 14, "gen_cantor");
  const int n = 1 << k;
  const double scale = 0.9 / (1.0 - std::pow(3.0, -k));
  PointCloud cloud;
  cloud.kind = MetricKind::euclidean;
  cloud.analytic_dim = std::log(2.0) / std::log(3.0);
  cloud.points.reserve(n);
  for (int m = 0; m < n; ++m) {
    double x = 0.0, unit = 1.0;
    for (int b = k - 1; b >= 0; --b) {
      unit /= 3.0;
      if (m & (1 << b)) x += 2.0 * unit;
    }
    cloud.points.push_back({x * scale});
  }
  cloud.weights.assign(n, std::pow(2.0, -k));
  cloud.finalize();
  return cloud;
}

PointCloud gen_sierpinski_carpet(int k) {
  check_level(k, 5, "gen_sierpinski_carpet");
  const int side = static_cast<int>(std::lround(std::pow(3.0, k)));
  PointCloud cloud;
  cloud.kind = MetricKind::euclidean;
  cloud.analytic_dim = std::log(8.0) / std::log(3.0);
  for (int i = 0; i < side; ++i) {
    for (int j = 0; j < side; ++j) {
      bool keep = true;
      int a = i, b = j;
      for (int lvl = 0; lvl < k; ++lvl) {
        if (a % 3 == 1 && b % 3 == 1) {
          keep = false;
          break;
        }
        a /= 3;
        b /= 3;
      }
      if (keep)
        cloud.points.push_back({(i + 0.5) / side, (j + 0.5) / side});
    }
  }
  rescale_to_diam(cloud.points, 0.9);
  cloud.weights.assign(cloud.points.size(), std::pow(8.0, -k));
  cloud.finalize();
  return cloud;
}

PointCloud gen_sierpinski_gasket(int k) {
  check_level(k, 7, "gen_sierpinski_gasket");
  struct Tri {
    double x, y, s;
  };
  std::vector<Tri> tris{{0.0, 0.0, 1.0}};
  for (int lvl = 0; lvl < k; ++lvl) {
    std::vector<Tri> next;
    next.reserve(tris.size() * 3);
    for (const auto& t : tris) {
      const double h = t.s / 2.0;
      next.push_back({t.x, t.y, h});
      next.push_back({t.x + h, t.y, h});
      next.push_back({t.x + h / 2.0, t.y + h * std::sqrt(3.0) / 2.0, h});
    }
    tris = std::move(next);
  }
  PointCloud cloud;
  cloud.kind = MetricKind::euclidean;
  cloud.analytic_dim = std::log(3.0) / std::log(2.0);
  cloud.points.reserve(tris.size());
  for (const auto& t : tris)
    cloud.points.push_back({t.x + t.s / 2.0, t.y + t.s * std::sqrt(3.0) / 6.0});
  rescale_to_diam(cloud.points, 0.9);
  cloud.weights.assign(cloud.points.size(), std::pow(3.0, -k));
  cloud.finalize();
  return cloud;
}

PointCloud gen_snowflake_interval(int k, double gamma) {
  check_level(k, 14, "gen_snowflake_interval");
  if (!(gamma > 0.0 && gamma <= 1.0))
    throw std::invalid_argument("gen_snowflake_interval: gamma must lie in (0,1]");
  const int n = (1 << k) + 1;
  const double span = std::pow(0.9, 1.0 / gamma);  // so that span^gamma = 0.9
  const double step = span / (1 << k);
  PointCloud cloud;
  cloud.kind = MetricKind::snowflake;
  cloud.gamma = gamma;
  cloud.analytic_dim = 1.0 / gamma;
  cloud.points.reserve(n);
  for (int i = 0; i < n; ++i) cloud.points.push_back({i * step});
  cloud.weights.assign(n, 1.0 / n);
  cloud.finalize();
  return cloud;
}

}  // namespace besovcap
