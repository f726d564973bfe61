#include "besovcap/qs.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <stdexcept>

#include "besovcap/ahlfors.hpp"
#include "besovcap/energy.hpp"
#include "besovcap/generators.hpp"
#include "besovcap/util.hpp"

namespace besovcap {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

void SampledMap::validate() const {
  const int n = domain.size();
  if (n == 0 || codomain.size() != n)
    throw std::invalid_argument("SampledMap: clouds must be nonempty and of equal size");
  if (static_cast<int>(pairing.size()) != n)
    throw std::invalid_argument("SampledMap: pairing size mismatch");
  std::vector<char> hit(n, 0);
  for (int w : pairing) {
    if (w < 0 || w >= n || hit[w])
      throw std::invalid_argument("SampledMap: pairing is not a bijection");
    hit[w] = 1;
  }
}

SampledMap SampledMap::inverse() const {
  validate();
  SampledMap inv;
  inv.domain = codomain;
  inv.codomain = domain;
  inv.pairing.resize(pairing.size());
  for (std::size_t i = 0; i < pairing.size(); ++i) inv.pairing[pairing[i]] = static_cast<int>(i);
  return inv;
}

SampledMap make_identity_map(const PointCloud& cloud) {
  SampledMap map;
  map.domain = cloud;
  map.codomain = cloud;
  map.pairing.resize(cloud.size());
  for (int i = 0; i < cloud.size(); ++i) map.pairing[i] = i;
  return map;
}

SampledMap make_snowflake_identity_map(int k, double gamma) {
  SampledMap map;
  map.domain = gen_interval(k);
  map.codomain = gen_snowflake_interval(k, gamma);
  map.pairing.resize(map.domain.size());
  for (int i = 0; i < map.domain.size(); ++i) map.pairing[i] = i;
  return map;
}

SampledMap make_kink_map(int k) {
  SampledMap map;
  map.domain = gen_interval(k);
  PointCloud image;
  image.kind = MetricKind::euclidean;
  image.points.reserve(map.domain.size());
  for (int i = 0; i < map.domain.size(); ++i) {
    const double t = map.domain.points[i][0] / 0.9;
    const double f = t <= 0.5 ? t : 0.5 + (t - 0.5) * (t - 0.5);
    image.points.push_back({f * 1.2});  // range [0, 0.75] rescaled to diameter 0.9
  }
  image.weights = map.domain.weights;
  image.finalize();
  map.codomain = std::move(image);
  map.pairing.resize(map.domain.size());
  for (int i = 0; i < map.domain.size(); ++i) map.pairing[i] = i;
  return map;
}

SampledMap make_kink_inverse_map(int k) { return make_kink_map(k).inverse(); }

double weak_qs_constant(const SampledMap& map, long triple_budget, double rho,
                        std::uint64_t seed, TripleMode mode) {
  map.validate();
  if (triple_budget < 1) throw std::invalid_argument("weak_qs_constant: budget must be >= 1");
  const int n = map.domain.size();
  const auto& Z = map.domain;
  const auto& W = map.codomain;
  const auto& phi = map.pairing;

  auto ratio_of = [&](int x, int y, int z) -> double {
    // admissible when d_Z(x,z) <= d_Z(x,y) and the triple fits in rho
    const double dxy = Z.distance(x, y);
    const double dxz = Z.distance(x, z);
    if (dxz > dxy) return -1.0;
    if (rho < kInf) {
      if (dxy > rho || dxz > rho || Z.distance(y, z) > rho) return -1.0;
    }
    return W.distance(phi[x], phi[z]) / W.distance(phi[x], phi[y]);
  };

  const double total_triples =
      static_cast<double>(n) * (n - 1) * (n - 2);
  const bool exhaustive = mode == TripleMode::exhaustive ||
                          (mode == TripleMode::automatic && n <= 200) ||
                          static_cast<double>(triple_budget) >= total_triples;
  double best = 0.0;
  if (exhaustive) {
    for (int x = 0; x < n; ++x)
      for (int y = 0; y < n; ++y) {
        if (y == x) continue;
        for (int z = 0; z < n; ++z) {
          if (z == x || z == y) continue;
          best = std::max(best, ratio_of(x, y, z));
        }
      }
    return best;
  }
  SplitMix64 rng(seed);
  for (long t = 0; t < triple_budget; ++t) {
    const int x = static_cast<int>(rng.next_below(n));
    const int y = static_cast<int>(rng.next_below(n));
    const int z = static_cast<int>(rng.next_below(n));
    if (x == y || x == z || y == z) continue;  // degenerate triples never count
    best = std::max(best, ratio_of(x, y, z));
  }
  return best;
}

double Gauge::eval(double t) const {
  if (t <= 0.0) return 0.0;
  if (kind == Kind::power) return scale * std::pow(t, exponent);
  if (t <= ts.front()) return vs.front() * t / ts.front();
  for (std::size_t k = 1; k < ts.size(); ++k)
    if (t <= ts[k]) {
      const double frac = (t - ts[k - 1]) / (ts[k] - ts[k - 1]);
      return vs[k - 1] + frac * (vs[k] - vs[k - 1]);
    }
  if (ts.size() == 1) return vs.back();
  const double slope =
      (vs.back() - vs[vs.size() - 2]) / (ts.back() - ts[ts.size() - 2]);
  return vs.back() + slope * (t - ts.back());
}

void Gauge::validate() const {
  if (kind == Kind::power) {
    if (!(scale > 0.0) || !(exponent > 0.0))
      throw std::invalid_argument("Gauge: power law needs positive scale and exponent");
    return;
  }
  if (ts.empty() || ts.size() != vs.size())
    throw std::invalid_argument("Gauge: empty or mismatched table");
  for (std::size_t k = 0; k < ts.size(); ++k) {
    if (!(ts[k] > 0.0) || !(vs[k] > 0.0))
      throw std::invalid_argument("Gauge: table nodes must be positive");
    if (k > 0 && !(ts[k] > ts[k - 1]))
      throw std::invalid_argument("Gauge: table abscissae must increase");
    if (k > 0 && vs[k] < vs[k - 1])
      throw std::invalid_argument("Gauge: eta is not monotone on the tabulated grid");
  }
}

double PromotedGauge::eval(double t) const {
  const double e = base.eval(t);
  const double branches[4] = {e, plain_factor * e, plain_factor * base.eval(arg_scale * t),
                              denom_factor * e};
  return std::max({branches[0], branches[1], branches[2], branches[3]});
}

PromotedGauge promote_gauge(const GaugeParams& params) {
  params.eta.validate();
  if (!(params.kappa > 0.0) || !(params.r0 > 0.0) || !(params.diamZ > 0.0) ||
      !(params.diamW > 0.0) || !(params.C_L > 1.0))
    throw std::invalid_argument("promote_gauge: invalid gauge parameters");
  PromotedGauge promoted;
  promoted.base = params.eta;
  promoted.plain_factor = params.diamW / params.kappa;
  promoted.arg_scale = 2.0 * params.diamZ / params.r0;
  const double eta_at = params.eta.eval(params.r0 / (2.0 * params.diamZ));
  if (!(eta_at > 0.0)) throw std::invalid_argument("promote_gauge: eta vanishes at r0/(2 diamZ)");
  promoted.denom_factor = params.diamW / (params.kappa * eta_at);
  return promoted;
}

MorphismReport besov_morphism_norm(const SampledMap& map,
                                   const std::vector<std::vector<double>>& family,
                                   double theta_Z, double theta_W, double p) {
  map.validate();
  if (family.empty()) throw std::invalid_argument("besov_morphism_norm: empty family");
  MorphismReport report;
  const int n = map.domain.size();
  for (std::size_t f = 0; f < family.size(); ++f) {
    if (static_cast<int>(family[f].size()) != n)
      throw std::invalid_argument("besov_morphism_norm: family member size mismatch");
    const double energy_f = besov_energy(map.codomain, family[f], theta_W, p);
    if (energy_f == 0.0) {
      report.skipped_constant.push_back(static_cast<int>(f));
      continue;
    }
    std::vector<double> pullback(n);
    for (int i = 0; i < n; ++i) pullback[i] = family[f][map.pairing[i]];
    MorphismRow row;
    row.index = static_cast<int>(f);
    row.energy_f = energy_f;
    row.energy_pullback = besov_energy(map.domain, pullback, theta_Z, p);
    row.ratio = row.energy_pullback / energy_f;
    report.sup = std::max(report.sup, row.ratio);
    report.rows.push_back(row);
  }
  if (report.rows.empty())
    throw std::invalid_argument("besov_morphism_norm: every family member had zero energy");
  return report;
}

double cloud_dimension(const PointCloud& cloud) {
  if (cloud.analytic_dim > 0.0) return cloud.analytic_dim;
  return estimate_ahlfors_Q(cloud).q_hat;
}

double sharp_theta(const PointCloud& cloud, double p) { return cloud_dimension(cloud) / p; }

namespace {

// BFS path between two points in the mesh-adjacency graph (d <= 2*mesh)
std::vector<int> mesh_path(const PointCloud& cloud, int from, int to) {
  const int n = cloud.size();
  const double threshold = 2.0 * cloud.mesh;
  std::vector<int> prev(n, -2);
  std::deque<int> queue{from};
  prev[from] = -1;
  while (!queue.empty()) {
    const int v = queue.front();
    queue.pop_front();
    if (v == to) break;
    for (int w = 0; w < n; ++w)
      if (prev[w] == -2 && cloud.distance(v, w) <= threshold) {
        prev[w] = v;
        queue.push_back(w);
      }
  }
  std::vector<int> path;
  if (prev[to] == -2) return path;
  for (int v = to; v != -1; v = prev[v]) path.push_back(v);
  std::sort(path.begin(), path.end());
  return path;
}

}  // namespace

DetectorReport qs_capacity_detector(const SampledMap& map, double theta_Z, double theta_W,
                                    double p, const DetectorOptions& opts) {
  map.validate();
  const double Q_Z = cloud_dimension(map.domain);
  if (std::abs(theta_Z * p - Q_Z) > 1e-9)
    throw std::invalid_argument(
        "qs_capacity_detector: theta_Z * p must equal the domain dimension (sharp regime)");
  if (!(opts.C_L > 1.0)) throw std::invalid_argument("qs_capacity_detector: C_L must exceed 1");

  const auto& Z = map.domain;
  const auto& W = map.codomain;
  const auto& phi = map.pairing;
  const int n = Z.size();

  const PairEnergy form_z = assemble_besov_form(Z, theta_Z, p);
  const PairEnergy form_w = assemble_besov_form(W, theta_W, p);

  // one configuration per sampled anchor: the adversarial admissible pair
  // (y, z) maximizing the image distance ratio at that anchor
  DetectorReport report;
  const std::vector<int> inv_pairing = map.inverse().pairing;
  const std::vector<int> anchors = sample_indices(n, opts.n_configs, opts.seed);
  for (int x : anchors) {
    int y = -1, z = -1;
    double best_ratio = -1.0;
    for (int yy = 0; yy < n; ++yy) {
      if (yy == x) continue;
      for (int zz = 0; zz < n; ++zz) {
        if (zz == x || zz == yy) continue;
        if (Z.distance(x, yy) > Z.distance(x, zz)) continue;
        const double ratio = W.distance(phi[x], phi[yy]) / W.distance(phi[x], phi[zz]);
        if (ratio > best_ratio) {
          best_ratio = ratio;
          y = yy;
          z = zz;
        }
      }
    }
    if (y < 0) continue;

    DetectorRow row;
    row.x = x;
    row.y = y;
    row.z = z;
    row.r = Z.distance(x, y);
    row.R = Z.distance(x, z);
    row.L = W.distance(phi[x], phi[y]);
    row.l = W.distance(phi[x], phi[z]);
    row.measured_ratio = row.L / row.l;

    report.max_measured_ratio = std::max(report.max_measured_ratio, row.measured_ratio);

    const double cl2 = opts.C_L * opts.C_L;
    if (row.L <= cl2 * std::exp(1.0) * row.l) {
      // distortion already bounded at this configuration
      row.status = "bounded";
      row.implied_pm1 = cl2 * std::exp(1.0);
      row.implied_p = row.implied_pm1;
      row.violation = row.measured_ratio / row.implied_pm1;
      report.max_implied_pm1 = std::max(report.max_implied_pm1, row.implied_pm1);
      report.max_implied_p = std::max(report.max_implied_p, row.implied_p);
      report.max_violation = std::max(report.max_violation, row.violation);
      report.rows.push_back(std::move(row));
      continue;
    }

    // image annulus condenser around phi(x)
    std::vector<int> e_w, f_w;
    for (int w = 0; w < n; ++w) {
      const double d = W.distance(phi[x], w);
      if (d <= opts.C_L * row.l) e_w.push_back(w);
      else if (d >= row.L / opts.C_L) f_w.push_back(w);
    }
    if (e_w.empty() || f_w.empty()) {
      row.status = "empty-annulus";
      report.rows.push_back(std::move(row));
      continue;
    }

    // pulled-back chain plates; far-point candidates tried from the farthest
    // image down until the chains are disjoint
    const std::vector<int> f_z = mesh_path(Z, x, z);
    std::vector<int> far_candidates = f_w;
    std::sort(far_candidates.begin(), far_candidates.end(), [&](int a, int b) {
      return W.distance(phi[x], a) > W.distance(phi[x], b);
    });
    const auto& inverse_pairing = inv_pairing;
    std::vector<int> e_z;
    for (std::size_t attempt = 0; attempt < std::min<std::size_t>(8, far_candidates.size());
         ++attempt) {
      const int w_pre = inverse_pairing[far_candidates[attempt]];
      std::vector<int> candidate = mesh_path(Z, y, w_pre);
      if (candidate.empty()) continue;
      std::vector<int> overlap;
      std::set_intersection(candidate.begin(), candidate.end(), f_z.begin(), f_z.end(),
                            std::back_inserter(overlap));
      if (overlap.empty()) {
        e_z = std::move(candidate);
        break;
      }
    }
    if (f_z.empty() || e_z.empty()) {
      row.status = "chains-collide";
      report.rows.push_back(std::move(row));
      continue;
    }

    SolveOptions solve_opts;
    solve_opts.tol = opts.tol;
    const SolveReport cap_w = minimize_condenser(form_w, e_w, f_w, p, solve_opts);
    const SolveReport cap_z = minimize_condenser(form_z, e_z, f_z, p, solve_opts);
    if (!cap_w.converged || !cap_z.converged || cap_w.value <= 0.0) {
      row.status = "solver-failed";
      report.rows.push_back(std::move(row));
      continue;
    }
    row.cap_annulus_w = cap_w.value;
    row.cap_chains_z = cap_z.value;
    row.probe = cap_z.value / cap_w.value;
    row.implied_pm1 = cl2 * std::exp(std::pow(row.probe, 1.0 / (p - 1.0)));
    row.implied_p = cl2 * std::exp(std::pow(row.probe, 1.0 / p));
    // a bounded morphism would keep the measured distortion under the
    // capacity-implied bound; the excess factor is the violation certificate
    row.violation = row.measured_ratio / row.implied_pm1;
    row.status = "ok";
    report.max_probe = std::max(report.max_probe, row.probe);
    report.max_implied_pm1 = std::max(report.max_implied_pm1, row.implied_pm1);
    report.max_implied_p = std::max(report.max_implied_p, row.implied_p);
    report.max_violation = std::max(report.max_violation, row.violation);
    report.rows.push_back(std::move(row));
  }
  return report;
}

QsVerdict classify_trend(const std::vector<double>& h_per_level) {
  if (h_per_level.size() < 2) return QsVerdict::inconclusive;
  const double growth = h_per_level.back() / h_per_level.front();
  if (growth >= 2.0) return QsVerdict::non_qs_trend;
  bool flat = growth <= 1.25;
  for (std::size_t k = 1; k < h_per_level.size() && flat; ++k)
    if (h_per_level[k] > 1.25 * h_per_level[k - 1]) flat = false;
  return flat ? QsVerdict::consistent_with_qs : QsVerdict::inconclusive;
}

std::string to_string(QsVerdict verdict) {
  switch (verdict) {
    case QsVerdict::consistent_with_qs: return "consistent-with-QS";
    case QsVerdict::non_qs_trend: return "non-QS-trend";
    default: return "inconclusive";
  }
}

}  // namespace besovcap
