#include "besovcap/caplab.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <stdexcept>

#include "besovcap/ahlfors.hpp"
#include "besovcap/util.hpp"

namespace besovcap {

namespace {
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kInf = std::numeric_limits<double>::infinity();
}  // namespace

void validate(const AnnulusSpec& spec, const PointCloud& cloud) {
  if (spec.x0 < 0 || spec.x0 >= cloud.size())
    throw std::invalid_argument("AnnulusSpec: center index out of range");
  if (!(spec.r > 0.0 && spec.r < spec.R / 2.0))
    throw std::invalid_argument("AnnulusSpec: need 0 < r < R/2");
  if (!(spec.R / 2.0 <= cloud.diam + 1e-15))
    throw std::invalid_argument("AnnulusSpec: need R/2 <= diam");
}

int annulus_case(double p, double theta, double Q) {
  if (!(p * theta > 0.0) || !(Q > 0.0))
    throw std::invalid_argument("annulus_case: p*theta and Q must be positive");
  const double gap = p * theta - Q;
  if (std::abs(gap) < 1e-9) return 2;
  return gap > 0.0 ? 1 : 3;
}

AnnulusBound predicted_annulus_bound(double r, double R, double p, double theta, double Q) {
  if (!(r > 0.0 && r < R / 2.0))
    throw std::invalid_argument("predicted_annulus_bound: need 0 < r < R/2");
  AnnulusBound out;
  out.case_tag = annulus_case(p, theta, Q);
  switch (out.case_tag) {
    case 1: out.value = std::pow(R, Q - theta * p); break;
    case 2: out.value = std::pow(std::log(R / r), 1.0 - p); break;
    default: out.value = std::pow(r, Q - theta * p); break;
  }
  return out;
}

namespace {

// distance from x to the closed sampled ball around x0
std::vector<double> set_distance_to_ball(const PointCloud& cloud, int x0, double radius) {
  const int n = cloud.size();
  const double limit = radius * (1.0 + 1e-12);  // absorb last-ulp rounding of exact ties
  std::vector<int> ball;
  for (int i = 0; i < n; ++i)
    if (cloud.distance(x0, i) <= limit) ball.push_back(i);
  std::vector<double> dist(n, kInf);
  for (int x = 0; x < n; ++x)
    for (int b : ball) dist[x] = std::min(dist[x], cloud.distance(x, b));
  return dist;
}

}  // namespace

std::vector<double> lipschitz_cutoff(const PointCloud& cloud, const AnnulusSpec& spec,
                                     CutoffVariant variant) {
  validate(spec, cloud);
  const double radius = variant == CutoffVariant::caseR ? spec.R / 2.0 : spec.r;
  const double slope = variant == CutoffVariant::caseR ? 2.0 / spec.R : 1.0 / spec.r;
  const auto dist = set_distance_to_ball(cloud, spec.x0, radius);
  std::vector<double> u(cloud.size());
  for (int x = 0; x < cloud.size(); ++x) u[x] = std::max(0.0, 1.0 - slope * dist[x]);
  return u;
}

std::vector<double> log_cutoff(const PointCloud& cloud, const AnnulusSpec& spec) {
  validate(spec, cloud);
  const double denom = std::log(spec.R / spec.r);
  std::vector<double> u(cloud.size());
  for (int x = 0; x < cloud.size(); ++x) {
    const double d = cloud.distance(x, spec.x0);
    if (d <= spec.r * (1.0 + 1e-12)) {
      u[x] = 1.0;  // includes the d = 0 convention at x0
      continue;
    }
    if (d >= spec.R * (1.0 - 1e-12)) {
      u[x] = 0.0;
      continue;
    }
    u[x] = std::min(std::max(std::log(spec.R / d) / denom, 0.0), 1.0);
  }
  return u;
}

std::vector<double> log_cutoff_gradient_bound(const UniformizedGraph& ug,
                                              const PointCloud& cloud,
                                              const AnnulusSpec& spec) {
  validate(spec, cloud);
  const double denom = std::log(spec.R / spec.r);
  const auto& g = ug.base;
  std::vector<double> bound(g.vertices.size(), 0.0);
  for (std::size_t v = 0; v < g.vertices.size(); ++v) {
    const double d = cloud.distance(g.vertices[v].point, spec.x0);
    if (d >= spec.r && d < spec.R) bound[v] = 1.0 / (denom * d);
  }
  return bound;
}

ScalingReport annulus_experiment(const PointCloud& cloud, const UniformizedGraph* ug, int x0,
                                 const std::vector<std::pair<double, double>>& grid, double p,
                                 double theta, double tol) {
  if (grid.size() < 4)
    throw std::invalid_argument("annulus_experiment: need at least 4 grid points");
  const double Q =
      cloud.analytic_dim > 0.0 ? cloud.analytic_dim : estimate_ahlfors_Q(cloud).q_hat;

  ScalingReport report;
  report.case_tag = annulus_case(p, theta, Q);
  report.p = p;
  report.theta = theta;
  report.Q = Q;

  // regressed variable per case; the grid must span at least a factor 8
  auto variable = [&](double r, double R) {
    switch (report.case_tag) {
      case 1: return R;
      case 2: return R / r;
      default: return r;
    }
  };
  double vmin = kInf, vmax = 0.0;
  for (const auto& [r, R] : grid) {
    vmin = std::min(vmin, variable(r, R));
    vmax = std::max(vmax, variable(r, R));
  }
  if (vmax / vmin < 8.0 - 1e-9)
    throw std::invalid_argument(
        "annulus_experiment: grid spans less than a factor 8 in the regressed variable");

  const PairEnergy form = assemble_besov_form(cloud, theta, p);

  std::vector<double> fit_x, fit_y;
  for (const auto& [r, R] : grid) {
    AnnulusSpec spec{x0, r, R};
    ScalingRow row;
    row.r = r;
    row.R = R;
    row.case_tag = report.case_tag;
    row.predicted = predicted_annulus_bound(r, R, p, theta, Q).value;
    row.gradbound_energy = kNaN;
    validate(spec, cloud);

    std::vector<int> E, F;
    for (int i = 0; i < cloud.size(); ++i) {
      const double d = cloud.distance(x0, i);
      if (d <= r) E.push_back(i);
      else if (d >= R) F.push_back(i);
    }
    if (E.empty() || F.empty()) {
      row.status = "empty-plate";
      row.capacity = kNaN;
      row.testfn_energy = kNaN;
      report.rows.push_back(row);
      continue;
    }

    std::vector<double> u;
    switch (report.case_tag) {
      case 1: u = lipschitz_cutoff(cloud, spec, CutoffVariant::caseR); break;
      case 2: u = log_cutoff(cloud, spec); break;
      default: u = lipschitz_cutoff(cloud, spec, CutoffVariant::caser); break;
    }
    row.testfn_energy = form.energy(u, p);

    if (report.case_tag == 2 && ug != nullptr) {
      const auto gb = log_cutoff_gradient_bound(*ug, cloud, spec);
      double acc = 0.0;
      for (std::size_t v = 0; v < gb.size(); ++v)
        acc += std::pow(gb[v], p) * ug->mu_beta[v];
      row.gradbound_energy = acc;
    }

    SolveOptions opts;
    opts.tol = tol;
    const SolveReport solve = minimize_condenser(form, E, F, p, opts);
    row.capacity = solve.value;
    if (!solve.converged) {
      row.status = "solver-failed";
    } else if (row.capacity > row.testfn_energy * (1.0 + 1e-6) + 1e-12) {
      row.status = "sandwich-violated";
    } else {
      row.status = "ok";
      fit_x.push_back(report.case_tag == 2 ? std::log(std::log(R / r))
                                           : std::log(variable(r, R)));
      fit_y.push_back(std::log(row.capacity));
    }
    report.rows.push_back(row);
  }

  if (fit_x.size() >= 2) {
    const LinearFit fit = fit_line(fit_x, fit_y);
    report.fitted_exponent = fit.slope;
    report.residual = fit.rms_residual;
  } else {
    report.fitted_exponent = kNaN;
    report.residual = kNaN;
  }
  if (report.case_tag == 2) {
    report.target_exponent = 1.0 - p;
    report.alt_target_exponent = -p;
    report.alt_matches_better = std::abs(report.fitted_exponent - report.alt_target_exponent) <
                                std::abs(report.fitted_exponent - report.target_exponent);
    report.fit_variable = "log(log(R/r))";
  } else {
    report.target_exponent = Q - theta * p;
    report.alt_target_exponent = 0.0;
    report.fit_variable = report.case_tag == 1 ? "log(R)" : "log(r)";
  }
  return report;
}

namespace {

// connected components of `set` under adjacency d <= 2*mesh
std::vector<std::vector<int>> mesh_components(const PointCloud& cloud,
                                              const std::vector<int>& set) {
  const double threshold = 2.0 * cloud.mesh;
  std::vector<std::vector<int>> comps;
  std::vector<char> seen(set.size(), 0);
  for (std::size_t seed = 0; seed < set.size(); ++seed) {
    if (seen[seed]) continue;
    std::vector<int> comp;
    std::deque<std::size_t> queue{seed};
    seen[seed] = 1;
    while (!queue.empty()) {
      const std::size_t k = queue.front();
      queue.pop_front();
      comp.push_back(set[k]);
      for (std::size_t m = 0; m < set.size(); ++m)
        if (!seen[m] && cloud.distance(set[k], set[m]) <= threshold) {
          seen[m] = 1;
          queue.push_back(m);
        }
    }
    std::sort(comp.begin(), comp.end());
    comps.push_back(std::move(comp));
  }
  return comps;
}

double set_diameter(const PointCloud& cloud, const std::vector<int>& set) {
  double d = 0.0;
  for (std::size_t a = 0; a < set.size(); ++a)
    for (std::size_t b = a + 1; b < set.size(); ++b)
      d = std::max(d, cloud.distance(set[a], set[b]));
  return d;
}

// center of the smallest enclosing ball among the set's own points
std::pair<int, double> one_center(const PointCloud& cloud, const std::vector<int>& set) {
  int best = set[0];
  double best_r = kInf;
  for (int c : set) {
    double r = 0.0;
    for (int z : set) r = std::max(r, cloud.distance(c, z));
    if (r < best_r) {
      best_r = r;
      best = c;
    }
  }
  return {best, best_r};
}

}  // namespace

bool sample_connected(const PointCloud& cloud, const std::vector<int>& set) {
  if (set.empty()) return false;
  return mesh_components(cloud, set).size() == 1;
}

ContentEstimate hausdorff_content(const PointCloud& cloud, const std::vector<int>& E, double s,
                                  double tau) {
  if (!(s > 0.0)) throw std::invalid_argument("hausdorff_content: s must be positive");
  if (!(tau > 0.0)) throw std::invalid_argument("hausdorff_content: tau must be positive");
  ContentEstimate est;
  est.s = s;
  if (E.empty()) {
    est.method = "empty";
    return est;
  }
  std::vector<int> set = E;
  std::sort(set.begin(), set.end());
  set.erase(std::unique(set.begin(), set.end()), set.end());
  for (int i : set)
    if (i < 0 || i >= cloud.size())
      throw std::invalid_argument("hausdorff_content: index out of range");

  const double mesh = cloud.mesh;
  double best = kInf;
  std::vector<std::pair<int, double>> best_cover;
  std::string best_method;

  // one enclosing ball per mesh-connected component
  {
    double value = 0.0;
    std::vector<std::pair<int, double>> cover;
    bool admissible = true;
    for (const auto& comp : mesh_components(cloud, set)) {
      const double d = set_diameter(cloud, comp);
      if (d >= tau) {
        admissible = false;
        break;
      }
      const auto [center, radius] = one_center(cloud, comp);
      cover.emplace_back(center, radius);
      value += std::pow(d, s);  // diam 0 for singletons contributes nothing
    }
    if (admissible && value < best) {
      best = value;
      best_cover = std::move(cover);
      best_method = "components";
    }
  }

  // points with a mesh-neighbour inside E stand in for a continuum piece;
  // only genuinely isolated samples may be covered for free
  std::vector<char> has_neighbor(set.size(), 0);
  for (std::size_t a = 0; a < set.size(); ++a)
    for (std::size_t b = 0; b < set.size(); ++b)
      if (a != b && cloud.distance(set[a], set[b]) <= 2.0 * mesh) {
        has_neighbor[a] = 1;
        break;
      }

  // greedy max-coverage covers over a dyadic scale ladder
  for (double rho = cloud.diam / 2.0; rho >= mesh; rho /= 2.0) {
    if (std::isfinite(tau) && 2.0 * rho + mesh >= tau) continue;
    std::vector<char> covered(set.size(), 0);
    std::size_t remaining = set.size();
    double value = 0.0;
    std::vector<std::pair<int, double>> cover;
    while (remaining > 0) {
      int best_center = -1;
      int best_count = 0;
      for (std::size_t c = 0; c < set.size(); ++c) {
        int count = 0;
        for (std::size_t m = 0; m < set.size(); ++m)
          if (!covered[m] && cloud.distance(set[c], set[m]) <= rho) ++count;
        if (count > best_count) {
          best_count = count;
          best_center = static_cast<int>(c);
        }
      }
      if (best_center < 0) break;
      std::vector<int> cluster;
      std::size_t cluster_first = 0;
      double radius = 0.0;
      for (std::size_t m = 0; m < set.size(); ++m) {
        const double d = cloud.distance(set[best_center], set[m]);
        if (!covered[m] && d <= rho) {
          covered[m] = 1;
          --remaining;
          if (cluster.empty()) cluster_first = m;
          cluster.push_back(set[m]);
          radius = std::max(radius, d);
        }
      }
      const double d = set_diameter(cloud, cluster);
      // pad by the mesh: the cluster stands in for a continuum piece at least
      // that much wider, which keeps fine covers from leaking the gaps
      if (d > 0.0) {
        value += std::pow(d + std::min(mesh, d), s);
      } else if (has_neighbor[cluster_first]) {
        value += std::pow(mesh, s);
      }
      cover.emplace_back(set[best_center], radius);
    }
    if (remaining == 0 && value < best) {
      best = value;
      best_cover = std::move(cover);
      best_method = "ladder";
    }
  }

  if (!std::isfinite(best)) {
    // tau below anything the sample can resolve: fall back to point balls
    for (int z : set) best_cover.emplace_back(z, 0.0);
    best = 0.0;
    best_method = "singletons";
  }
  est.value = best;
  est.cover = std::move(best_cover);
  est.method = std::move(best_method);
  return est;
}

double loewner_lower_bound(double contentE, double contentF, double R, double s, double theta,
                           double p, double Q) {
  if (!(p > 1.0) || !(p > Q - s))
    throw std::invalid_argument("loewner_lower_bound: requires p > max{1, Q-s}");
  if (!(theta > (Q - s) / p && theta < 1.0))
    throw std::invalid_argument("loewner_lower_bound: requires (Q-s)/p < theta < 1");
  if (contentE < 0.0 || contentF < 0.0)
    throw std::invalid_argument("loewner_lower_bound: contents must be nonnegative");
  if (!(R > 0.0)) throw std::invalid_argument("loewner_lower_bound: R must be positive");
  return std::min(contentE, contentF) / std::pow(R, s - Q + theta * p);
}

LoewnerReport loewner_experiment(const PointCloud& cloud, const std::vector<ContinuumPair>& pairs,
                                 double s, double theta, double p, double tol) {
  const double Q =
      cloud.analytic_dim > 0.0 ? cloud.analytic_dim : estimate_ahlfors_Q(cloud).q_hat;
  LoewnerReport report;
  report.s = s;
  report.theta = theta;
  report.p = p;
  report.c_min = kInf;

  const PairEnergy form = assemble_besov_form(cloud, theta, p);
  for (const auto& pair : pairs) {
    if (!sample_connected(cloud, pair.E) || !sample_connected(cloud, pair.F))
      throw std::invalid_argument("loewner_experiment: plates must be sample-connected");
    LoewnerRow row;
    row.R = pair.R;
    row.contentE = hausdorff_content(cloud, pair.E, s, kInf).value;
    row.contentF = hausdorff_content(cloud, pair.F, s, kInf).value;
    row.lower_bound = loewner_lower_bound(row.contentE, row.contentF, pair.R, s, theta, p, Q);

    SolveOptions opts;
    opts.tol = tol;
    const SolveReport solve = minimize_condenser(form, pair.E, pair.F, p, opts);
    row.capacity = solve.value;
    row.status = solve.converged ? "ok" : "solver-failed";
    row.ratio = row.lower_bound > 0.0 ? row.capacity / row.lower_bound : kInf;
    if (solve.converged && std::isfinite(row.ratio))
      report.c_min = std::min(report.c_min, row.ratio);
    report.rows.push_back(std::move(row));
  }
  return report;
}

ContinuumPair quarter_segment_condenser(const PointCloud& cloud, int x0, double R) {
  if (x0 < 0 || x0 >= cloud.size())
    throw std::invalid_argument("quarter_segment_condenser: center out of range");
  if (cloud.points.empty() || cloud.points[0].empty())
    throw std::invalid_argument("quarter_segment_condenser: needs coordinate data");
  const double c0 = cloud.points[x0][0];
  ContinuumPair pair;
  pair.R = R;
  for (int i = 0; i < cloud.size(); ++i) {
    const double c = cloud.points[i][0];
    if (c >= c0 - R / 2.0 && c <= c0 - R / 4.0) pair.E.push_back(i);
    if (c >= c0 + R / 4.0 && c <= c0 + R / 2.0) pair.F.push_back(i);
  }
  if (pair.E.empty() || pair.F.empty())
    throw std::invalid_argument("quarter_segment_condenser: empty plate at this scale");
  return pair;
}

}  // namespace besovcap
