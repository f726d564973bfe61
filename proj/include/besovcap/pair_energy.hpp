#pragma once

#include <span>
#include <vector>

namespace besovcap {

struct PairTerm {
  int i;
  int j;
  double w;
};

/// Energy of the form sum_e w_e |u_i - u_j|^p over a list of weighted pairs.
/// Backs both the Besov double-sum form (dense pairs) and the graph Newton
/// form (edge conductances).
struct PairEnergy {
  int n = 0;
  std::vector<PairTerm> terms;

  double energy(std::span<const double> u, double p) const;
  void add_gradient(std::span<const double> u, double p, std::span<double> grad) const;
  /// y_i = sum_j w_ij (x_i - x_j)
  void laplacian_matvec(std::span<const double> x, std::span<double> y) const;
  /// row sums of the pair weights
  std::vector<double> degree() const;
};

struct SolveOptions {
  double tol = 1e-8;
  long max_iterations = 100000;
  bool force_descent = false;  // run the general-p path even at p = 2
};

struct SolveReport {
  double value = 0.0;
  int iterations = 0;
  double final_optimality = 0.0;
  bool converged = false;
  std::vector<double> minimizer;
};

/// Minimizes the p-energy subject to u = 1 on `ones` and u = 0 on `zeros`.
/// p = 2 is solved as an SPD linear system on the free nodes (Jacobi-
/// preconditioned conjugate gradients, tol = relative residual); general p
/// by projected gradient descent with backtracking (tol = relative energy
/// change per accepted step).
SolveReport minimize_condenser(const PairEnergy& form, const std::vector<int>& ones,
                               const std::vector<int>& zeros, double p,
                               const SolveOptions& opts = {});

}  // namespace besovcap
