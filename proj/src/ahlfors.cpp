#include "besovcap/ahlfors.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "besovcap/util.hpp"

namespace besovcap {

namespace {

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t h = v.size() / 2;
  return v.size() % 2 ? v[h] : 0.5 * (v[h - 1] + v[h]);
}

}  // namespace

AhlforsEstimate estimate_ahlfors_Q(const PointCloud& cloud, const AhlforsOptions& opts) {
  if (!(cloud.diam > 0.0))
    throw std::invalid_argument("estimate_ahlfors_Q: degenerate cloud");
  const int n = cloud.size();

  // Dyadic ladder between the saturation scale and the sample resolution.
  // diam/2 is skipped unless scales are scarce: balls that large clip against
  // the far side of the space and flatten the regression.
  auto build_radii = [&](int top_j) {
    std::vector<double> radii;
    for (int j = top_j; j <= 30; ++j) {
      const double r = cloud.diam * std::pow(2.0, -j);
      if (r < 2.0 * cloud.min_gap) break;
      radii.push_back(r);
    }
    return radii;
  };
  std::vector<double> radii = build_radii(2);
  if (static_cast<int>(radii.size()) < 4) radii = build_radii(1);
  while (static_cast<int>(radii.size()) < 3)
    radii.push_back(radii.empty() ? cloud.diam / 2.0 : radii.back() / 2.0);

  const std::vector<int> centers = sample_indices(n, opts.n_centers, opts.seed);

  std::vector<double> log_r, stat;
  for (double r : radii) {
    std::vector<double> logs;
    logs.reserve(centers.size());
    for (int c : centers) logs.push_back(std::log(corrected_ball_measure(cloud, c, r)));
    log_r.push_back(std::log(r));
    stat.push_back(median(std::move(logs)));
  }

  const LinearFit fit = fit_line(log_r, stat);
  AhlforsEstimate est;
  est.q_hat = fit.slope;
  est.residual = fit.rms_residual;
  est.n_radii = static_cast<int>(radii.size());
  est.n_centers = static_cast<int>(centers.size());
  if (n < 16) {
    est.flagged = true;
    est.flag_reason = "fewer than 16 points";
  } else if (est.n_radii < opts.min_radii) {
    est.flagged = true;
    est.flag_reason = "too few usable dyadic radii";
  } else if (est.residual > 0.2) {
    est.flagged = true;
    est.flag_reason = "high regression residual (insufficient scale range)";
  }
  return est;
}

}  // namespace besovcap
