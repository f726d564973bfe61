#include "besovcap/energy.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "besovcap/util.hpp"

namespace besovcap {

namespace {

constexpr int kDenseLimit = 5100;

void check_dense_size(const PointCloud& cloud, const char* who) {
  if (cloud.size() > kDenseLimit)
    throw std::length_error(std::string(who) +
                            ": cloud exceeds the dense O(N^2) budget; refusing");
}

// Visits one row of the Besov double sum: calls fn(z, K(x,z)) for every z != x,
// where K(x,z) = w(x) w(z) / (d^{theta p} * nu(closed ball(x,d))).
template <typename Fn>
void besov_row(const PointCloud& cloud, int x, double theta_p, Fn&& fn) {
  const int n = cloud.size();
  thread_local std::vector<double> dist_buf;
  thread_local std::vector<int> order_buf;
  dist_buf.resize(n);
  order_buf.resize(n);
  for (int j = 0; j < n; ++j) dist_buf[j] = cloud.distance(x, j);
  std::iota(order_buf.begin(), order_buf.end(), 0);
  std::sort(order_buf.begin(), order_buf.end(),
            [&](int a, int b) { return dist_buf[a] < dist_buf[b]; });

  const double wx = cloud.weights[x];
  double cum = 0.0;
  std::size_t k = 0;
  while (k < order_buf.size()) {
    const double d = dist_buf[order_buf[k]];
    std::size_t end = k;
    double group = 0.0;
    while (end < order_buf.size() && dist_buf[order_buf[end]] == d)
      group += cloud.weights[order_buf[end++]];
    cum += group;  // closed ball: the whole tie group is inside
    if (d > 0.0) {
      const double denom = std::pow(d, theta_p) * cum;
      for (std::size_t t = k; t < end; ++t) {
        const int z = order_buf[t];
        fn(z, wx * cloud.weights[z] / denom);
      }
    }
    k = end;
  }
}

}  // namespace

double besov_energy(const PointCloud& cloud, std::span<const double> u, double theta, double p) {
  if (!(p > 1.0) || !(theta > 0.0 && theta < 1.0))
    throw std::invalid_argument("besov_energy: need p > 1 and theta in (0,1)");
  if (static_cast<int>(u.size()) != cloud.size())
    throw std::invalid_argument("besov_energy: function size mismatch");
  check_dense_size(cloud, "besov_energy");

  const int n = cloud.size();
  const double theta_p = theta * p;
  std::vector<double> row_sums(n, 0.0);
  parallel_for(0, n, [&](int x) {
    double acc = 0.0;
    besov_row(cloud, x, theta_p, [&](int z, double K) {
      acc += K * std::pow(std::abs(u[x] - u[z]), p);
    });
    row_sums[x] = acc;
  });
  double total = 0.0;
  for (double s : row_sums) total += s;  // fixed order: deterministic
  return total;
}

PairEnergy assemble_besov_form(const PointCloud& cloud, double theta, double p) {
  if (!(p > 1.0) || !(theta > 0.0 && theta < 1.0))
    throw std::invalid_argument("assemble_besov_form: need p > 1 and theta in (0,1)");
  check_dense_size(cloud, "assemble_besov_form");

  const int n = cloud.size();
  const double theta_p = theta * p;
  PairEnergy form;
  form.n = n;
  form.terms.resize(static_cast<std::size_t>(n) * (n - 1) / 2);

  std::vector<std::size_t> row_offset(n, 0);
  for (int i = 1; i < n; ++i)
    row_offset[i] = row_offset[i - 1] + static_cast<std::size_t>(n - i);
  auto tri = [&](int i, int j) {  // requires i < j
    return row_offset[i] + static_cast<std::size_t>(j - i - 1);
  };

  parallel_for(0, n, [&](int i) {
    for (int j = i + 1; j < n; ++j) form.terms[tri(i, j)] = {i, j, 0.0};
  });
  // K(x,z) for z > x: row x owns the (x,z) slots
  parallel_for(0, n, [&](int x) {
    besov_row(cloud, x, theta_p, [&](int z, double K) {
      if (z > x) form.terms[tri(x, z)].w = K;
    });
  });
  // K(x,z) for z < x: row x owns the (z,x) slots
  parallel_for(0, n, [&](int x) {
    besov_row(cloud, x, theta_p, [&](int z, double K) {
      if (z < x) form.terms[tri(z, x)].w += K;
    });
  });
  return form;
}

PairEnergy newton_form(const UniformizedGraph& ug, double p) {
  if (!(p > 1.0)) throw std::invalid_argument("newton_form: p must exceed 1");
  const auto& g = ug.base;
  PairEnergy form;
  form.n = static_cast<int>(g.vertices.size());
  form.terms.reserve(g.edges.size());
  for (std::size_t e = 0; e < g.edges.size(); ++e) {
    const auto [v, w] = g.edges[e];
    const double mass = ug.mu_beta[v] / g.degree(v) + ug.mu_beta[w] / g.degree(w);
    form.terms.push_back({v, w, mass / std::pow(ug.edge_lengths[e], p)});
  }
  return form;
}

double newton_energy(const UniformizedGraph& ug, std::span<const double> U, double p) {
  if (static_cast<int>(U.size()) != static_cast<int>(ug.base.vertices.size()))
    throw std::invalid_argument("newton_energy: function size mismatch");
  return newton_form(ug, p).energy(U, p);
}

namespace {
void check_condenser(const Condenser& cond, Condenser::Arena expected, int n) {
  if (cond.arena != expected)
    throw std::invalid_argument("capacity: condenser arena does not match the operation");
  if (cond.E.empty() || cond.F.empty())
    throw std::invalid_argument("capacity: plates must be nonempty");
  std::vector<char> in_e(n, 0);
  for (int i : cond.E) {
    if (i < 0 || i >= n) throw std::invalid_argument("capacity: plate index out of range");
    in_e[i] = 1;
  }
  for (int i : cond.F) {
    if (i < 0 || i >= n) throw std::invalid_argument("capacity: plate index out of range");
    if (in_e[i]) throw std::invalid_argument("capacity: plates intersect");
  }
}
}  // namespace

SolveReport besov_capacity(const PointCloud& cloud, const Condenser& cond, double theta,
                           double p, double tol) {
  check_condenser(cond, Condenser::Arena::cloud, cloud.size());
  const PairEnergy form = assemble_besov_form(cloud, theta, p);
  SolveOptions opts;
  opts.tol = tol;
  return minimize_condenser(form, cond.E, cond.F, p, opts);
}

SolveReport besov_capacity(const PairEnergy& form, const Condenser& cond, double p, double tol) {
  check_condenser(cond, Condenser::Arena::cloud, form.n);
  SolveOptions opts;
  opts.tol = tol;
  return minimize_condenser(form, cond.E, cond.F, p, opts);
}

SolveReport newton_capacity(const UniformizedGraph& ug, const Condenser& cond, double p,
                            double tol) {
  check_condenser(cond, Condenser::Arena::graph, static_cast<int>(ug.base.vertices.size()));
  const PairEnergy form = newton_form(ug, p);
  SolveOptions opts;
  opts.tol = tol;
  return minimize_condenser(form, cond.E, cond.F, p, opts);
}

std::vector<double> extend(const PointCloud& cloud, const UniformizedGraph& ug,
                           std::span<const double> u) {
  if (static_cast<int>(u.size()) != cloud.size())
    throw std::invalid_argument("extend: function size mismatch");
  const auto& g = ug.base;
  std::vector<double> out(g.vertices.size(), 0.0);
  parallel_for(0, static_cast<int>(g.vertices.size()), [&](int v) {
    const auto [lvl, pt] = g.vertices[v];
    const double radius = std::min(std::pow(ug.params.alpha, -lvl), 2.0 * cloud.diam);
    double mass = 0.0, acc = 0.0;
    for (int z : ball_members(cloud, {pt, radius, true})) {
      mass += cloud.weights[z];
      acc += cloud.weights[z] * u[z];
    }
    out[v] = acc / mass;
  });
  return out;
}

std::vector<double> trace(const PointCloud& cloud, const UniformizedGraph& ug,
                          std::span<const double> U) {
  if (U.size() != ug.base.vertices.size())
    throw std::invalid_argument("trace: function size mismatch");
  std::vector<double> out(cloud.size());
  for (int z = 0; z < cloud.size(); ++z) out[z] = U[ug.boundary_reps[z]];
  return out;
}

double extension_energy_ratio(const PointCloud& cloud, const UniformizedGraph& ug,
                              std::span<const double> u, double theta, double p) {
  if (std::abs(theta - ug.params.theta) > 1e-9 || std::abs(p - ug.params.p) > 1e-9)
    throw std::invalid_argument(
        "extension_energy_ratio: (theta, p) must match the uniformization parameters");
  const double besov = besov_energy(cloud, u, theta, p);
  if (besov == 0.0) return 0.0;
  return newton_energy(ug, extend(cloud, ug, u), p) / besov;
}

std::vector<std::vector<double>> lipschitz_test_family(const PointCloud& cloud, int count,
                                                       std::uint64_t seed) {
  const int n = cloud.size();
  SplitMix64 rng(seed);
  std::vector<std::vector<double>> family;
  family.reserve(count);
  for (int f = 0; f < count; ++f) {
    const int anchor = static_cast<int>(rng.next_below(n));
    std::vector<double> u(n);
    if (f % 2 == 0) {
      for (int i = 0; i < n; ++i) u[i] = cloud.distance(i, anchor);
    } else {
      const double a = (0.2 + 0.6 * rng.next_double()) * cloud.diam;
      for (int i = 0; i < n; ++i) u[i] = std::max(0.0, a - cloud.distance(i, anchor));
    }
    family.push_back(std::move(u));
  }
  return family;
}

}  // namespace besovcap
