#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "besovcap/caplab.hpp"
#include "besovcap/filling.hpp"
#include "besovcap/generators.hpp"

using namespace besovcap;

namespace {

UniformizedGraph make_ug(const PointCloud& cloud, double p, double theta) {
  const NetHierarchy nets = build_nets(cloud, 2.0, default_depth(cloud, 2.0));
  const FillingGraph g = build_graph(cloud, nets, 1.5);
  return uniformize(g, make_params(2.0, p, theta), cloud);
}

}  // namespace

TEST_CASE("predicted annulus bounds, all three cases") {
  // p theta = Q: log(R/r)^{1-p}; at R/r = e^2, p = 2 this is 1/2
  const AnnulusBound case2 =
      predicted_annulus_bound(0.01, 0.01 * std::exp(2.0), 2.0, 0.5, 1.0);
  CHECK(case2.case_tag == 2);
  CHECK(case2.value == doctest::Approx(0.5).epsilon(1e-12));

  // p theta < Q: r^{Q - theta p}; r = 0.01, exponent 1/2 -> 0.1
  const AnnulusBound case3 = predicted_annulus_bound(0.01, 0.2, 2.0, 0.25, 1.0);
  CHECK(case3.case_tag == 3);
  CHECK(case3.value == doctest::Approx(0.1).epsilon(1e-12));

  // p theta > Q: R^{Q - theta p}; R = 0.25, exponent -1/2 -> 2
  const AnnulusBound case1 = predicted_annulus_bound(0.05, 0.25, 2.0, 0.75, 1.0);
  CHECK(case1.case_tag == 1);
  CHECK(case1.value == doctest::Approx(2.0).epsilon(1e-12));

  CHECK_THROWS_AS(predicted_annulus_bound(0.01, 0.1, 2.0, 0.5, -1.0), std::invalid_argument);
  CHECK_THROWS_AS(predicted_annulus_bound(0.2, 0.3, 2.0, 0.5, 1.0), std::invalid_argument);
  CHECK(annulus_case(2.0, 0.5, 1.0 + 1e-12) == 2);  // equality window
}

TEST_CASE("lipschitz cutoffs") {
  const PointCloud cloud = gen_interval(4);  // gap 0.05625
  const double gap = cloud.min_gap;
  const AnnulusSpec spec{8, 2.0 * gap, 8.0 * gap};

  const auto case_r = lipschitz_cutoff(cloud, spec, CutoffVariant::caser);
  CHECK(case_r[8] == 1.0);   // inside the small ball
  CHECK(case_r[9] == 1.0);   // still inside (d = gap <= r)
  CHECK(case_r[11] == doctest::Approx(0.5));  // set distance r/2
  CHECK(case_r[16] == 0.0);  // clamped far away

  const auto case_R = lipschitz_cutoff(cloud, spec, CutoffVariant::caseR);
  CHECK(case_R[8] == 1.0);                  // x in B(x0, R/2)
  CHECK(case_R[8 + 4] == 1.0);              // boundary of B(x0, R/2)
  CHECK(case_R[0] == 0.0);                  // dist >= R/2 clamps to zero
  for (double v : case_R) {
    CHECK(v >= 0.0);
    CHECK(v <= 1.0);
  }
}

TEST_CASE("log cutoff") {
  const PointCloud cloud = gen_interval(4);
  const double gap = cloud.min_gap;
  const AnnulusSpec spec{0, gap, 4.0 * gap};
  const auto u = log_cutoff(cloud, spec);
  CHECK(u[0] == 1.0);  // d = 0 convention
  CHECK(u[1] == 1.0);  // d <= r clamps to one
  CHECK(u[2] == doctest::Approx(0.5).epsilon(1e-9));  // d = sqrt(r R) = 2 gap
  CHECK(u[4] == 0.0);  // d >= R
  CHECK(u[10] == 0.0);
}

TEST_CASE("log cutoff gradient bound") {
  const PointCloud cloud = gen_interval(4);
  const UniformizedGraph ug = make_ug(cloud, 2.0, 0.5);
  const double gap = cloud.min_gap;
  const double r = 2.0 * gap;
  const AnnulusSpec spec{0, r, std::exp(1.0) * r};
  const auto bound = log_cutoff_gradient_bound(ug, cloud, spec);

  const auto& g = ug.base;
  double prev_d = -1.0, prev_b = 1e300;
  for (std::size_t v = 0; v < g.vertices.size(); ++v) {
    const double d = cloud.distance(g.vertices[v].point, spec.x0);
    if (d >= spec.R) CHECK(bound[v] == 0.0);           // indicator support
    if (d < spec.r) CHECK(bound[v] == 0.0);
    if (std::abs(d - r) < 1e-15) CHECK(bound[v] == doctest::Approx(1.0 / r));
    if (bound[v] > 0.0 && prev_d > 0.0 && d > prev_d) CHECK(bound[v] <= prev_b + 1e-15);
    if (bound[v] > 0.0) {
      prev_d = d;
      prev_b = bound[v];
    }
  }
}

TEST_CASE("annulus experiment, case 2 shape on a small interval") {
  const PointCloud cloud = gen_interval(7);
  const int x0 = cloud.size() / 2;
  const double R = 0.42;
  std::vector<std::pair<double, double>> grid;
  for (double ratio : {8.0, 16.0, 32.0, 64.0}) grid.emplace_back(R / ratio, R);
  const ScalingReport report = annulus_experiment(cloud, nullptr, x0, grid, 2.0, 0.5);

  CHECK(report.case_tag == 2);
  CHECK(report.fit_variable == "log(log(R/r))");
  for (const auto& row : report.rows) {
    CHECK(row.status == "ok");
    // minimizer against a feasible point
    CHECK(row.capacity <= row.testfn_energy * (1.0 + 1e-6) + 1e-12);
    CHECK(row.capacity > 0.0);
  }
  CHECK(report.target_exponent == doctest::Approx(-1.0));
  CHECK(report.fitted_exponent == doctest::Approx(-1.0).epsilon(0.45));

  // fixed r, growing R: capacities nonincreasing in R/r
  std::vector<std::pair<double, double>> grow;
  for (double R2 : {0.04, 0.08, 0.16, 0.32}) grow.emplace_back(0.005, R2);
  const ScalingReport mono = annulus_experiment(cloud, nullptr, x0, grow, 2.0, 0.5);
  for (std::size_t k = 1; k < mono.rows.size(); ++k)
    CHECK(mono.rows[k].capacity <= mono.rows[k - 1].capacity * (1.0 + 1e-9));
}

TEST_CASE("annulus experiment, case 3 vanishing small-ball capacities") {
  const PointCloud cloud = gen_interval(7);
  const int x0 = cloud.size() / 2;
  std::vector<std::pair<double, double>> grid;
  for (double r : {0.04, 0.02, 0.01, 0.005}) grid.emplace_back(r, 0.4);
  const ScalingReport report = annulus_experiment(cloud, nullptr, x0, grid, 2.0, 0.25);
  CHECK(report.case_tag == 3);
  CHECK(report.target_exponent == doctest::Approx(0.5));
  CHECK(report.fitted_exponent == doctest::Approx(0.5).epsilon(0.5));
  // capacity of the annulus tends to zero with r
  for (std::size_t k = 1; k < report.rows.size(); ++k)
    CHECK(report.rows[k].capacity < report.rows[k - 1].capacity);

  // a grid spanning less than a factor 8 is refused
  std::vector<std::pair<double, double>> narrow{{0.04, 0.4}, {0.03, 0.4}, {0.02, 0.4}, {0.015, 0.4}};
  CHECK_THROWS_AS(annulus_experiment(cloud, nullptr, x0, narrow, 2.0, 0.25),
                  std::invalid_argument);
}

TEST_CASE("hausdorff content") {
  const PointCloud cloud = gen_interval(6);
  const double inf = std::numeric_limits<double>::infinity();

  // empty and singleton sets
  CHECK(hausdorff_content(cloud, {}, 1.0, inf).value == 0.0);
  CHECK(hausdorff_content(cloud, {7}, 1.0, inf).value == 0.0);

  // the full connected sample at s = 1 reads off its length
  std::vector<int> all(cloud.size());
  for (int i = 0; i < cloud.size(); ++i) all[i] = i;
  const ContentEstimate full = hausdorff_content(cloud, all, 1.0, inf);
  CHECK(full.value <= 0.9 + 1e-9);
  CHECK(full.value >= 0.9 - 2.0 * cloud.mesh);

  // monotone on nested segments
  std::vector<int> half(all.begin(), all.begin() + cloud.size() / 2);
  std::vector<int> quarter(all.begin(), all.begin() + cloud.size() / 4);
  const double v_half = hausdorff_content(cloud, half, 1.0, inf).value;
  const double v_quarter = hausdorff_content(cloud, quarter, 1.0, inf).value;
  CHECK(v_quarter <= v_half + 1e-12);
  CHECK(v_half <= full.value + 1e-12);

  // subadditive under union of separated segments
  std::vector<int> left(all.begin(), all.begin() + 12);
  std::vector<int> right(all.begin() + 40, all.begin() + 52);
  std::vector<int> both = left;
  both.insert(both.end(), right.begin(), right.end());
  CHECK(hausdorff_content(cloud, both, 1.0, inf).value <=
        hausdorff_content(cloud, left, 1.0, inf).value +
            hausdorff_content(cloud, right, 1.0, inf).value + 1e-12);

  // scale restriction: every reported ball obeys diam < tau, and the value
  // cannot exceed count * (2 tau)^s
  const double tau = 0.2;
  const ContentEstimate scaled = hausdorff_content(cloud, all, 1.0, tau);
  CHECK(scaled.value <= scaled.cover.size() * std::pow(2.0 * tau, 1.0));
  for (const auto& [center, radius] : scaled.cover) CHECK(2.0 * radius < tau);

  // cover validity: every requested point is inside some reported ball
  for (int z : all) {
    bool covered = false;
    for (const auto& [center, radius] : scaled.cover)
      if (cloud.distance(center, z) <= radius * (1.0 + 1e-12)) covered = true;
    CHECK(covered);
  }
}

TEST_CASE("loewner lower bound formula") {
  // maximal contents R^s give R^{Q - theta p}
  const double R = 0.3, s = 0.5, Q = 1.0, theta = 0.7, p = 2.0;
  const double maximal = std::pow(R, s);
  CHECK(loewner_lower_bound(maximal, maximal, R, s, theta, p, Q) ==
        doctest::Approx(std::pow(R, Q - theta * p)).epsilon(1e-12));

  CHECK(loewner_lower_bound(0.0, 0.5, R, s, theta, p, Q) == 0.0);
  CHECK(loewner_lower_bound(0.2, 0.4, R, s, theta, p, Q) * 2.0 ==
        doctest::Approx(loewner_lower_bound(0.4, 0.8, R, s, theta, p, Q)));

  CHECK_THROWS_AS(loewner_lower_bound(1.0, 1.0, R, 0.1, 0.2, 1.5, 2.0), std::invalid_argument);
  CHECK_THROWS_AS(loewner_lower_bound(1.0, 1.0, R, s, 0.1, 2.0, 1.9), std::invalid_argument);
}

TEST_CASE("loewner experiment on quarter segments") {
  const PointCloud cloud = gen_interval(7);
  const int x0 = cloud.size() / 2;
  std::vector<ContinuumPair> pairs;
  for (double R : {0.2, 0.4}) pairs.push_back(quarter_segment_condenser(cloud, x0, R));
  const LoewnerReport report = loewner_experiment(cloud, pairs, 1.0, 0.5, 2.0);
  REQUIRE(report.rows.size() == 2);
  for (const auto& row : report.rows) {
    CHECK(row.status == "ok");
    CHECK(row.ratio > 0.0);
    CHECK(std::isfinite(row.ratio));
    // for connected sets at s = 1 the content anchors to the diameter
    CHECK(row.contentE <= row.R / 2.0);
    CHECK(row.contentE >= row.R / 8.0);
  }
  CHECK(report.c_min > 0.0);

  // scattered plates violate the sample-connectivity precondition
  std::vector<ContinuumPair> scattered{{{0, 40}, {80, 120}, 0.4}};
  CHECK_THROWS_AS(loewner_experiment(cloud, scattered, 1.0, 0.5, 2.0),
                  std::invalid_argument);

  // shrinking F to a singleton kills the lower bound, so nothing can violate it
  ContinuumPair tiny = quarter_segment_condenser(cloud, x0, 0.4);
  tiny.F = {tiny.F[0]};
  const LoewnerReport degenerate = loewner_experiment(cloud, {tiny}, 1.0, 0.5, 2.0);
  CHECK(degenerate.rows[0].contentF == 0.0);
  CHECK(degenerate.rows[0].lower_bound == 0.0);
  CHECK(degenerate.rows[0].status == "ok");
}

TEST_CASE("rescaled configurations scale the predicted bound by lambda^{Q - theta p}") {
  const double s = 1.0, Q = 1.0, theta = 0.25, p = 2.0;
  const double cE = 0.05, cF = 0.04, R = 0.2, lambda = 2.0;
  const double base = loewner_lower_bound(cE, cF, R, s, theta, p, Q);
  const double scaled =
      loewner_lower_bound(lambda * cE, lambda * cF, lambda * R, s, theta, p, Q);
  CHECK(scaled / base == doctest::Approx(std::pow(lambda, Q - theta * p)).epsilon(1e-12));
}
