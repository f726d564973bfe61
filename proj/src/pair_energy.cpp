#include "besovcap/pair_energy.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace besovcap {

double PairEnergy::energy(std::span<const double> u, double p) const {
  double acc = 0.0;
  if (p == 2.0) {
    for (const auto& t : terms) {
      const double d = u[t.i] - u[t.j];
      acc += t.w * d * d;
    }
  } else {
    for (const auto& t : terms) acc += t.w * std::pow(std::abs(u[t.i] - u[t.j]), p);
  }
  return acc;
}

void PairEnergy::add_gradient(std::span<const double> u, double p, std::span<double> grad) const {
  if (p == 2.0) {
    for (const auto& t : terms) {
      const double g = 2.0 * t.w * (u[t.i] - u[t.j]);
      grad[t.i] += g;
      grad[t.j] -= g;
    }
    return;
  }
  for (const auto& t : terms) {
    const double d = u[t.i] - u[t.j];
    if (d == 0.0) continue;
    const double g = p * t.w * std::pow(std::abs(d), p - 1.0) * (d > 0 ? 1.0 : -1.0);
    grad[t.i] += g;
    grad[t.j] -= g;
  }
}

void PairEnergy::laplacian_matvec(std::span<const double> x, std::span<double> y) const {
  std::fill(y.begin(), y.end(), 0.0);
  for (const auto& t : terms) {
    const double d = t.w * (x[t.i] - x[t.j]);
    y[t.i] += d;
    y[t.j] -= d;
  }
}

std::vector<double> PairEnergy::degree() const {
  std::vector<double> deg(n, 0.0);
  for (const auto& t : terms) {
    deg[t.i] += t.w;
    deg[t.j] += t.w;
  }
  return deg;
}

namespace {

struct Plates {
  std::vector<double> u;        // full vector, plate values set
  std::vector<char> fixed;      // 1 where constrained
  std::vector<int> free_nodes;  // indices of unconstrained nodes
};

Plates set_up_plates(int n, const std::vector<int>& ones, const std::vector<int>& zeros) {
  if (ones.empty() || zeros.empty())
    throw std::invalid_argument("minimize_condenser: both plates must be nonempty");
  Plates st;
  st.u.assign(n, 0.0);
  st.fixed.assign(n, 0);
  for (int i : zeros) {
    if (i < 0 || i >= n) throw std::invalid_argument("minimize_condenser: plate index out of range");
    st.fixed[i] = 1;
  }
  for (int i : ones) {
    if (i < 0 || i >= n) throw std::invalid_argument("minimize_condenser: plate index out of range");
    if (st.fixed[i]) throw std::invalid_argument("minimize_condenser: plates intersect");
    st.fixed[i] = 1;
    st.u[i] = 1.0;
  }
  for (int i = 0; i < n; ++i)
    if (!st.fixed[i]) st.free_nodes.push_back(i);
  return st;
}

SolveReport solve_linear(const PairEnergy& form, Plates st, const SolveOptions& opts) {
  const int n = form.n;
  const int nf = static_cast<int>(st.free_nodes.size());
  SolveReport report;

  // b = -(L u_plate) restricted to the free nodes
  std::vector<double> tmp(n, 0.0);
  form.laplacian_matvec(st.u, tmp);
  std::vector<double> b(nf);
  for (int k = 0; k < nf; ++k) b[k] = -tmp[st.free_nodes[k]];

  std::vector<double> diag_full = form.degree();
  std::vector<double> diag(nf);
  for (int k = 0; k < nf; ++k)
    diag[k] = std::max(diag_full[st.free_nodes[k]], 1e-300);

  std::vector<double> x(nf, 0.0), sc_full(n, 0.0);
  auto matvec = [&](const std::vector<double>& v, std::vector<double>& out) {
    std::fill(sc_full.begin(), sc_full.end(), 0.0);
    for (int k = 0; k < nf; ++k) sc_full[st.free_nodes[k]] = v[k];
    form.laplacian_matvec(sc_full, tmp);
    for (int k = 0; k < nf; ++k) out[k] = tmp[st.free_nodes[k]];
  };
  auto dot = [](const std::vector<double>& a, const std::vector<double>& c) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * c[i];
    return s;
  };

  const double bnorm = std::sqrt(dot(b, b));
  if (bnorm > 0.0) {
    std::vector<double> r = b, z(nf), q(nf), d(nf);
    for (int k = 0; k < nf; ++k) z[k] = r[k] / diag[k];
    d = z;
    double rz = dot(r, z);
    int it = 0;
    double rel = 1.0;
    while (it < opts.max_iterations) {
      matvec(d, q);
      const double dq = dot(d, q);
      if (dq <= 0.0) break;
      const double step = rz / dq;
      for (int k = 0; k < nf; ++k) {
        x[k] += step * d[k];
        r[k] -= step * q[k];
      }
      ++it;
      rel = std::sqrt(dot(r, r)) / bnorm;
      if (rel <= opts.tol) break;
      for (int k = 0; k < nf; ++k) z[k] = r[k] / diag[k];
      const double rz_new = dot(r, z);
      const double mix = rz_new / rz;
      rz = rz_new;
      for (int k = 0; k < nf; ++k) d[k] = z[k] + mix * d[k];
    }
    report.iterations = it;
    report.final_optimality = rel;
    report.converged = rel <= opts.tol;
  } else {
    report.converged = true;
  }

  for (int k = 0; k < nf; ++k) st.u[st.free_nodes[k]] = x[k];
  report.value = form.energy(st.u, 2.0);
  report.minimizer = std::move(st.u);
  return report;
}

SolveReport solve_descent(const PairEnergy& form, Plates st, double p, const SolveOptions& opts) {
  const int n = form.n;
  const int nf = static_cast<int>(st.free_nodes.size());
  SolveReport report;

  for (int k = 0; k < nf; ++k) st.u[st.free_nodes[k]] = 0.5;
  std::vector<double> grad(n), grad_prev(n), u_prev(n), trial(n);

  double energy = form.energy(st.u, p);
  double step = 1.0;
  int it = 0;
  double rel_change = 1.0;
  bool have_prev = false;

  while (it < opts.max_iterations) {
    std::fill(grad.begin(), grad.end(), 0.0);
    form.add_gradient(st.u, p, grad);

    double gnorm2 = 0.0;
    for (int k = 0; k < nf; ++k) {
      const double g = grad[st.free_nodes[k]];
      gnorm2 += g * g;
    }
    if (gnorm2 == 0.0) {
      report.converged = true;
      break;
    }

    if (have_prev) {
      // Barzilai-Borwein step, safeguarded by the backtracking below
      double sy = 0.0, yy = 0.0;
      for (int k = 0; k < nf; ++k) {
        const int i = st.free_nodes[k];
        const double s = st.u[i] - u_prev[i];
        const double y = grad[i] - grad_prev[i];
        sy += s * y;
        yy += y * y;
      }
      if (sy > 0.0 && yy > 0.0) step = std::clamp(sy / yy, 1e-14, 1e14);
    } else {
      step = 0.1 / std::sqrt(gnorm2);
    }

    u_prev = st.u;
    grad_prev = grad;
    have_prev = true;

    double trial_energy = 0.0;
    bool accepted = false;
    for (int bt = 0; bt < 60; ++bt) {
      trial = st.u;
      double move2 = 0.0;
      for (int k = 0; k < nf; ++k) {
        const int i = st.free_nodes[k];
        // minimizers obey the maximum principle, so the box projection is exact
        trial[i] = std::clamp(st.u[i] - step * grad[i], 0.0, 1.0);
        const double m = trial[i] - st.u[i];
        move2 += m * m;
      }
      trial_energy = form.energy(trial, p);
      if (trial_energy <= energy - 1e-4 * move2 / std::max(step, 1e-300)) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    ++it;
    if (!accepted) break;

    rel_change = (energy - trial_energy) / std::max(std::abs(energy), 1e-300);
    st.u = trial;
    energy = trial_energy;
    if (rel_change <= opts.tol) {
      report.converged = true;
      break;
    }
  }

  report.iterations = it;
  report.final_optimality = rel_change;
  report.value = energy;
  report.minimizer = std::move(st.u);
  return report;
}

}  // namespace

SolveReport minimize_condenser(const PairEnergy& form, const std::vector<int>& ones,
                               const std::vector<int>& zeros, double p,
                               const SolveOptions& opts) {
  if (!(p > 1.0)) throw std::invalid_argument("minimize_condenser: p must exceed 1");
  Plates st = set_up_plates(form.n, ones, zeros);
  if (st.free_nodes.empty()) {
    SolveReport report;
    report.value = form.energy(st.u, p);
    report.converged = true;
    report.minimizer = std::move(st.u);
    return report;
  }
  if (p == 2.0 && !opts.force_descent) return solve_linear(form, std::move(st), opts);
  return solve_descent(form, std::move(st), p, opts);
}

}  // namespace besovcap
