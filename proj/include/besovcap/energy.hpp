#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "besovcap/pair_energy.hpp"
#include "besovcap/point_cloud.hpp"
#include "besovcap/uniformize.hpp"

namespace besovcap {

/// Condenser plates; indices refer to cloud points or graph vertices.
struct Condenser {
  enum class Arena { cloud, graph };
  std::vector<int> E;
  std::vector<int> F;
  Arena arena = Arena::cloud;
};

/// Besov energy: double sum over ordered pairs x != z of
///   |u(x)-u(z)|^p w(x) w(z) / (d(x,z)^{theta p} nu(closed ball(x, d(x,z)))).
/// The closed ball in the denominator keeps it >= w(x) + w(z) > 0.
double besov_energy(const PointCloud& cloud, std::span<const double> u, double theta, double p);

/// Dense pair form of the Besov energy, symmetrized over the two orders of
/// each pair. Refuses clouds beyond ~5e3 points rather than subsampling.
PairEnergy assemble_besov_form(const PointCloud& cloud, double theta, double p);

/// Graph Dirichlet form: sum over edges of c_e |U(v)-U(w)|^p with
/// c_e = [mu_beta(v)/deg(v) + mu_beta(w)/deg(w)] / ell_eps(e)^p.
PairEnergy newton_form(const UniformizedGraph& ug, double p);
double newton_energy(const UniformizedGraph& ug, std::span<const double> U, double p);

SolveReport besov_capacity(const PointCloud& cloud, const Condenser& cond, double theta,
                           double p, double tol = 1e-8);
SolveReport besov_capacity(const PairEnergy& form, const Condenser& cond, double p,
                           double tol = 1e-8);
SolveReport newton_capacity(const UniformizedGraph& ug, const Condenser& cond, double p,
                            double tol = 1e-8);

/// Extension by ball averages: value at vertex (n,z) is the nu-weighted
/// average of u over the closed ball B(z, alpha^{-n}).
std::vector<double> extend(const PointCloud& cloud, const UniformizedGraph& ug,
                           std::span<const double> u);

/// Boundary read-off: value at cloud point z is U(boundary_rep(z)).
std::vector<double> trace(const PointCloud& cloud, const UniformizedGraph& ug,
                          std::span<const double> U);

/// newton_energy(extend(u)) / besov_energy(u); 0 when u is constant.
double extension_energy_ratio(const PointCloud& cloud, const UniformizedGraph& ug,
                              std::span<const double> u, double theta, double p);

/// Deterministic family of Lipschitz-1 test functions (distance functions
/// and tents around seeded anchors).
std::vector<std::vector<double>> lipschitz_test_family(const PointCloud& cloud, int count,
                                                       std::uint64_t seed);

}  // namespace besovcap
