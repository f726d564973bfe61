#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "besovcap/energy.hpp"
#include "besovcap/filling.hpp"
#include "besovcap/generators.hpp"
#include "besovcap/uniformize.hpp"
#include "besovcap/util.hpp"

using namespace besovcap;

namespace {

PointCloud two_point_cloud(double d) {
  PointCloud cloud;
  cloud.points = {{0.0}, {d}};
  cloud.weights = {0.5, 0.5};
  cloud.finalize();
  return cloud;
}

UniformizedGraph make_ug(const PointCloud& cloud, double p, double theta) {
  const NetHierarchy nets = build_nets(cloud, 2.0, default_depth(cloud, 2.0));
  const FillingGraph g = build_graph(cloud, nets, 1.5);
  return uniformize(g, make_params(2.0, p, theta), cloud);
}

std::vector<double> random_values(int n, std::uint64_t seed) {
  SplitMix64 rng(seed);
  std::vector<double> u(n);
  for (double& v : u) v = rng.next_double();
  return u;
}

// dense Gauss elimination on the free-node system; independent of the CG path
double brute_force_capacity_p2(const PairEnergy& form, const std::vector<int>& ones,
                               const std::vector<int>& zeros) {
  const int n = form.n;
  std::vector<double> lap(n * n, 0.0);
  for (const auto& t : form.terms) {
    lap[t.i * n + t.i] += t.w;
    lap[t.j * n + t.j] += t.w;
    lap[t.i * n + t.j] -= t.w;
    lap[t.j * n + t.i] -= t.w;
  }
  std::vector<double> u(n, -1.0);
  for (int i : zeros) u[i] = 0.0;
  for (int i : ones) u[i] = 1.0;
  std::vector<int> free_nodes;
  for (int i = 0; i < n; ++i)
    if (u[i] < 0.0) free_nodes.push_back(i);
  const int nf = static_cast<int>(free_nodes.size());
  std::vector<double> a(nf * nf), b(nf, 0.0);
  for (int r = 0; r < nf; ++r) {
    for (int c = 0; c < nf; ++c) a[r * nf + c] = lap[free_nodes[r] * n + free_nodes[c]];
    for (int j = 0; j < n; ++j)
      if (u[j] >= 0.0) b[r] -= lap[free_nodes[r] * n + j] * u[j];
  }
  for (int col = 0; col < nf; ++col) {  // plain elimination, no pivoting needed (SPD)
    for (int row = col + 1; row < nf; ++row) {
      const double f = a[row * nf + col] / a[col * nf + col];
      for (int k = col; k < nf; ++k) a[row * nf + k] -= f * a[col * nf + k];
      b[row] -= f * b[col];
    }
  }
  for (int row = nf - 1; row >= 0; --row) {
    double s = b[row];
    for (int k = row + 1; k < nf; ++k) s -= a[row * nf + k] * u[free_nodes[k]];
    u[free_nodes[row]] = s / a[row * nf + row];
  }
  return form.energy(u, 2.0);
}

}  // namespace

TEST_CASE("besov energy hand values") {
  const double theta = 0.5, p = 2.0;

  // constants have zero energy
  const PointCloud cloud = gen_interval(4);
  CHECK(besov_energy(cloud, std::vector<double>(cloud.size(), 3.7), theta, p) == 0.0);

  // two points at distance d, masses 1/2, indicator: 0.5 * d^{-theta p}
  for (double d : {0.2, 0.5, 0.9}) {
    const PointCloud two = two_point_cloud(d);
    const std::vector<double> u{1.0, 0.0};
    CHECK(besov_energy(two, u, theta, p) ==
          doctest::Approx(0.5 * std::pow(d, -theta * p)).epsilon(1e-12));
  }

  // p-homogeneity
  auto u = random_values(cloud.size(), 5);
  const double base = besov_energy(cloud, u, theta, 3.0);
  for (double& v : u) v *= -2.5;
  CHECK(besov_energy(cloud, u, theta, 3.0) ==
        doctest::Approx(std::pow(2.5, 3.0) * base).epsilon(1e-12));
}

TEST_CASE("assembled form agrees with the direct double sum") {
  const PointCloud cloud = gen_cantor(5);
  const double theta = 0.4, p = 2.5;
  const PairEnergy form = assemble_besov_form(cloud, theta, p);
  for (std::uint64_t seed : {1, 2, 3}) {
    const auto u = random_values(cloud.size(), seed);
    CHECK(form.energy(u, p) == doctest::Approx(besov_energy(cloud, u, theta, p)).epsilon(1e-10));
  }
}

TEST_CASE("newton energy on a three-vertex path with unit conductances") {
  PairEnergy path;
  path.n = 3;
  path.terms = {{0, 1, 1.0}, {1, 2, 1.0}};
  CHECK(path.energy(std::vector<double>{1.0, 0.5, 0.0}, 2.0) == doctest::Approx(0.5));
  CHECK(path.energy(std::vector<double>{2.0, 2.0, 2.0}, 2.0) == 0.0);
  // homogeneity at p = 3
  CHECK(path.energy(std::vector<double>{2.0, 1.0, 0.0}, 3.0) ==
        doctest::Approx(8.0 * path.energy(std::vector<double>{1.0, 0.5, 0.0}, 3.0)));
}

TEST_CASE("series conductance oracle: path capacity is 1/2") {
  PairEnergy path;
  path.n = 3;
  path.terms = {{0, 1, 1.0}, {1, 2, 1.0}};
  const SolveReport report = minimize_condenser(path, {0}, {2}, 2.0);
  CHECK(report.converged);
  CHECK(report.value == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(report.minimizer[1] == doctest::Approx(0.5).epsilon(1e-9));
}

TEST_CASE("plate handling") {
  PairEnergy path;
  path.n = 3;
  path.terms = {{0, 1, 1.0}, {1, 2, 1.0}};
  CHECK_THROWS_AS(minimize_condenser(path, {0, 1}, {1}, 2.0), std::invalid_argument);
  CHECK_THROWS_AS(minimize_condenser(path, {}, {1}, 2.0), std::invalid_argument);

  // all nodes constrained: the forced function's energy, no iterations
  const SolveReport forced = minimize_condenser(path, {0, 1}, {2}, 2.0);
  CHECK(forced.iterations == 0);
  CHECK(forced.value == doctest::Approx(1.0));
}

TEST_CASE("besov capacity: forced and tiny instances") {
  const PointCloud two = two_point_cloud(0.5);
  Condenser cond;
  cond.E = {0};
  cond.F = {1};
  const SolveReport report = besov_capacity(two, cond, 0.5, 2.0);
  CHECK(report.value == doctest::Approx(0.5 * std::pow(0.5, -1.0)).epsilon(1e-12));
}

TEST_CASE("conjugate gradients matches dense elimination") {
  const PointCloud cloud = gen_interval(5);
  const PairEnergy form = assemble_besov_form(cloud, 0.5, 2.0);
  SplitMix64 rng(77);
  for (int trial = 0; trial < 5; ++trial) {
    const int a = static_cast<int>(rng.next_below(cloud.size()));
    int b = static_cast<int>(rng.next_below(cloud.size()));
    if (b == a) b = (a + 7) % cloud.size();
    Condenser cond;
    cond.E = {a};
    cond.F = {b};
    const SolveReport cg = besov_capacity(form, cond, 2.0, 1e-10);
    const double direct = brute_force_capacity_p2(form, cond.E, cond.F);
    CHECK(cg.converged);
    CHECK(cg.value == doctest::Approx(direct).epsilon(1e-8));
  }
}

TEST_CASE("projected descent at p = 2 matches the linear solve") {
  const PointCloud cloud = gen_interval(4);
  const PairEnergy form = assemble_besov_form(cloud, 0.5, 2.0);
  SolveOptions linear_opts;
  linear_opts.tol = 1e-12;
  SolveOptions descent_opts;
  descent_opts.tol = 1e-13;
  descent_opts.force_descent = true;
  SplitMix64 rng(31);
  for (int trial = 0; trial < 5; ++trial) {
    const int a = static_cast<int>(rng.next_below(cloud.size()));
    int b = static_cast<int>(rng.next_below(cloud.size()));
    if (b == a) b = (a + 3) % cloud.size();
    const SolveReport cg = minimize_condenser(form, {a}, {b}, 2.0, linear_opts);
    const SolveReport gd = minimize_condenser(form, {a}, {b}, 2.0, descent_opts);
    CHECK(gd.converged);
    CHECK(std::abs(gd.value - cg.value) <= 1e-6 * cg.value);
  }
}

TEST_CASE("maximum principle and monotonicity") {
  const PointCloud cloud = gen_interval(5);
  const PairEnergy form = assemble_besov_form(cloud, 0.5, 2.0);
  SplitMix64 rng(2024);
  for (int trial = 0; trial < 10; ++trial) {
    // random disjoint plates, then nested enlargements
    const int n = cloud.size();
    std::vector<int> E{static_cast<int>(rng.next_below(n / 2))};
    std::vector<int> F{static_cast<int>(n / 2 + rng.next_below(n / 2))};
    std::vector<int> E1 = E, F1 = F;
    E1.push_back((E[0] + 1) % (n / 2));
    F1.push_back(n / 2 + static_cast<int>((F[0] + 1) % (n / 2)));
    if (E1[1] == E1[0]) E1.pop_back();
    if (F1[1] == F1[0]) F1.pop_back();

    const SolveReport small = minimize_condenser(form, E, F, 2.0);
    const SolveReport large = minimize_condenser(form, E1, F1, 2.0);
    CHECK(small.value <= large.value * (1.0 + 1e-8) + 1e-14);
    for (double v : small.minimizer) {
      CHECK(v >= -1e-7);
      CHECK(v <= 1.0 + 1e-7);
    }
  }
}

TEST_CASE("newton capacity on the filling graph") {
  const PointCloud cloud = gen_interval(4);
  const UniformizedGraph ug = make_ug(cloud, 2.0, 0.5);
  const auto& g = ug.base;

  Condenser cond;
  cond.arena = Condenser::Arena::graph;
  cond.E = {ug.boundary_reps[0]};
  cond.F = {ug.boundary_reps[cloud.size() - 1]};
  const SolveReport report = newton_capacity(ug, cond, 2.0);
  CHECK(report.converged);
  CHECK(report.value > 0.0);
  for (double v : report.minimizer) {
    CHECK(v >= -1e-7);
    CHECK(v <= 1.0 + 1e-7);
  }

  // plates joined only through one bridge edge: capacity at most its
  // conductance (indicator of the E side is feasible)
  PairEnergy bridge;
  bridge.n = 4;
  bridge.terms = {{0, 1, 5.0}, {1, 2, 0.25}, {2, 3, 5.0}};
  const SolveReport tight = minimize_condenser(bridge, {0}, {3}, 2.0);
  CHECK(tight.value <= 0.25 * (1.0 + 1e-9));

  Condenser wrong;
  wrong.arena = Condenser::Arena::cloud;
  wrong.E = {0};
  wrong.F = {1};
  CHECK_THROWS_AS(newton_capacity(ug, wrong, 2.0), std::invalid_argument);
  (void)g;
}

TEST_CASE("general-p capacity behaves") {
  const PointCloud cloud = gen_interval(4);
  const PairEnergy form = assemble_besov_form(cloud, 0.4, 3.0);
  const SolveReport report = minimize_condenser(form, {0, 1}, {15, 16}, 3.0);
  CHECK(report.converged);
  CHECK(report.value > 0.0);
  for (double v : report.minimizer) {
    CHECK(v >= -1e-9);
    CHECK(v <= 1.0 + 1e-9);
  }
}

TEST_CASE("extension and trace") {
  const PointCloud cloud = gen_interval(6);
  const UniformizedGraph ug = make_ug(cloud, 2.0, 0.5);
  const auto& g = ug.base;
  const int n = cloud.size();

  // constants extend to constants, exactly
  const auto ones = extend(cloud, ug, std::vector<double>(n, 1.0));
  for (double v : ones) CHECK(v == 1.0);
  const auto back = trace(cloud, ug, ones);
  for (double v : back) CHECK(v == 1.0);

  // root value is the global average
  std::vector<double> u(n);
  for (int i = 0; i < n; ++i) u[i] = cloud.points[i][0];
  const auto eu = extend(cloud, ug, u);
  double avg = 0.0;
  for (int i = 0; i < n; ++i) avg += cloud.weights[i] * u[i];
  CHECK(eu[g.root] == doctest::Approx(avg).epsilon(1e-12));

  // deepest vertex over an isolated point reproduces the value exactly
  for (std::size_t v = 0; v < g.vertices.size(); ++v)
    if (g.vertices[v].level == g.depth) {
      const int pt = g.vertices[v].point;
      if (std::pow(2.0, -g.depth) < cloud.min_gap) CHECK(eu[v] == doctest::Approx(u[pt]));
    }

  // Lipschitz trace bound: sup |trace(extend(u)) - u| <= 2 Lip alpha^{-N}
  const double bound = 2.0 * std::pow(2.0, -g.depth);
  for (const auto& lip : lipschitz_test_family(cloud, 8, 99)) {
    const auto tr = trace(cloud, ug, extend(cloud, ug, lip));
    double sup = 0.0;
    for (int i = 0; i < n; ++i) sup = std::max(sup, std::abs(tr[i] - lip[i]));
    CHECK(sup <= bound + 1e-12);
  }
}

TEST_CASE("extension energy ratio") {
  const PointCloud cloud = gen_interval(5);
  const UniformizedGraph ug = make_ug(cloud, 2.0, 0.5);
  const int n = cloud.size();

  CHECK(extension_energy_ratio(cloud, ug, std::vector<double>(n, 2.0), 0.5, 2.0) == 0.0);
  CHECK_THROWS_AS(
      extension_energy_ratio(cloud, ug, std::vector<double>(n, 0.0), 0.7, 2.0),
      std::invalid_argument);

  std::vector<double> u(n);
  for (int i = 0; i < n; ++i) u[i] = cloud.distance(i, 0);
  const double ratio = extension_energy_ratio(cloud, ug, u, 0.5, 2.0);
  CHECK(ratio > 0.0);
  CHECK(std::isfinite(ratio));

  // invariant under scaling u -> c u
  std::vector<double> cu(u);
  for (double& v : cu) v *= 4.2;
  CHECK(extension_energy_ratio(cloud, ug, cu, 0.5, 2.0) == doctest::Approx(ratio).epsilon(1e-10));
}

TEST_CASE("matched besov/newton condenser capacities stay in a band") {
  const PointCloud cloud = gen_interval(5);
  const UniformizedGraph ug = make_ug(cloud, 2.0, 0.5);
  const PairEnergy besov = assemble_besov_form(cloud, 0.5, 2.0);
  double lo = 1e300, hi = 0.0;
  SplitMix64 rng(424);
  for (int trial = 0; trial < 3; ++trial) {
    const int n = cloud.size();
    const int a = static_cast<int>(rng.next_below(n / 3));
    const int b = static_cast<int>(2 * n / 3 + rng.next_below(n / 3));
    const SolveReport bc = minimize_condenser(besov, {a, a + 1}, {b, b - 1}, 2.0);
    Condenser graph_cond;
    graph_cond.arena = Condenser::Arena::graph;
    graph_cond.E = {ug.boundary_reps[a], ug.boundary_reps[a + 1]};
    graph_cond.F = {ug.boundary_reps[b], ug.boundary_reps[b - 1]};
    std::sort(graph_cond.E.begin(), graph_cond.E.end());
    graph_cond.E.erase(std::unique(graph_cond.E.begin(), graph_cond.E.end()),
                       graph_cond.E.end());
    std::sort(graph_cond.F.begin(), graph_cond.F.end());
    graph_cond.F.erase(std::unique(graph_cond.F.begin(), graph_cond.F.end()),
                       graph_cond.F.end());
    const SolveReport nc = newton_capacity(ug, graph_cond, 2.0);
    const double ratio = bc.value / nc.value;
    lo = std::min(lo, ratio);
    hi = std::max(hi, ratio);
  }
  CHECK(hi / lo <= 20.0);
}

TEST_CASE("dense-size guard") {
  CHECK_THROWS_AS(assemble_besov_form(gen_interval(13), 0.5, 2.0), std::length_error);
}

TEST_CASE("assembly does not depend on the worker count") {
  const PointCloud cloud = gen_cantor(6);
  set_worker_count(1);
  const PairEnergy serial = assemble_besov_form(cloud, 0.5, 2.0);
  set_worker_count(4);
  const PairEnergy parallel = assemble_besov_form(cloud, 0.5, 2.0);
  set_worker_count(0);
  REQUIRE(serial.terms.size() == parallel.terms.size());
  for (std::size_t k = 0; k < serial.terms.size(); ++k)
    CHECK(serial.terms[k].w == parallel.terms[k].w);
}
