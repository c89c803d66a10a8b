#pragma once

// Shared builders and independent reference computations for the tests.

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <random>
#include <vector>

#include "mfg/analytic.hpp"
#include "mfg/functional.hpp"
#include "mfg/grid.hpp"
#include "mfg/model.hpp"

namespace testing {

using namespace mfg;

/// Interval (0, 1): Neumann at 0 with influx j0, Dirichlet at 1 with exit
/// cost psi, quadratic H with potential V and g(m) = m.
inline ProblemSpec interval_problem(Expr V, double j0,
                                    Expr psi = Expr::constant(0.0)) {
  ProblemSpec p;
  p.domain = Domain::interval(0.0, 1.0);
  p.coupling = CouplingSpec::quadratic_positive_part();
  p.hamiltonian = HamiltonianSpec::quadratic(std::move(V));
  p.boundary.set(Face::left, BoundaryKind::neumann)
      .set(Face::right, BoundaryKind::dirichlet);
  p.boundary.influx = Expr::constant(j0);
  p.boundary.exit_cost = std::move(psi);
  return p;
}

/// Unit square with Neumann left/top and Dirichlet right/bottom faces.
inline ProblemSpec square_problem(CouplingSpec coupling,
                                  HamiltonianSpec hamiltonian,
                                  Expr influx = Expr::constant(0.5),
                                  Expr psi = Expr::constant(0.0)) {
  ProblemSpec p;
  p.domain = Domain::rectangle(0.0, 1.0, 0.0, 1.0);
  p.coupling = std::move(coupling);
  p.hamiltonian = std::move(hamiltonian);
  p.boundary.set(Face::left, BoundaryKind::neumann)
      .set(Face::top, BoundaryKind::neumann)
      .set(Face::right, BoundaryKind::dirichlet)
      .set(Face::bottom, BoundaryKind::dirichlet);
  p.boundary.influx = std::move(influx);
  p.boundary.exit_cost = std::move(psi);
  return p;
}

/// The four coupling x Hamiltonian combinations exercised everywhere.
inline std::vector<std::pair<CouplingSpec, HamiltonianSpec>> combinations(
    Expr V) {
  const auto power = CouplingSpec::power(1.0, 2.0);
  const auto quad = CouplingSpec::quadratic_positive_part();
  const auto hq = HamiltonianSpec::quadratic(V);
  const auto hm = HamiltonianSpec::model(
      3.0, Expr::sum({Expr::constant(1.0), Expr::sine(0.2, 1.0)}), V);
  return {{power, hq}, {power, hm}, {quad, hq}, {quad, hm}};
}

/// Root of a monotone function on [lo, hi] by plain bisection.
inline double bisect(const std::function<double(double)>& f, double lo,
                     double hi, int iters = 200) {
  double flo = f(lo);
  for (int k = 0; k < iters; ++k) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if ((fm > 0.0) == (flo > 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

/// Real roots of m^3 - V m^2 - c = 0 from the trigonometric/Cardano
/// formulas with complex cube roots; an independent check of the
/// bracketed root finder.
inline std::vector<double> cubic_roots_cardano(double V, double c) {
  // Depressed cubic via m = t + V / 3: t^3 + P t + Q = 0.
  const double P = -V * V / 3.0;
  const double Q = -2.0 * V * V * V / 27.0 - c;
  const std::complex<double> disc = Q * Q / 4.0 + P * P * P / 27.0;
  const std::complex<double> s = std::sqrt(disc);
  std::complex<double> A = std::pow(-Q / 2.0 + s, 1.0 / 3.0);
  if (std::abs(A) < 1e-300) A = std::pow(-Q / 2.0 - s, 1.0 / 3.0);
  const std::complex<double> omega(-0.5, std::sqrt(3.0) / 2.0);
  std::vector<double> roots;
  for (int k = 0; k < 3; ++k) {
    const std::complex<double> a = A * std::pow(omega, k);
    const std::complex<double> t =
        std::abs(a) < 1e-300 ? std::complex<double>(0.0) : a - P / (3.0 * a);
    if (std::abs(t.imag()) < 1e-7 * (1.0 + std::abs(t))) {
      roots.push_back(t.real() + V / 3.0);
    }
  }
  return roots;
}

/// Fields whose values are drawn from smooth modes, reproducible by seed.
inline Field smooth_field(const Grid& grid, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return random_smooth_field(grid, rng);
}

inline double linf(const std::vector<double>& a, const std::vector<double>& b) {
  double e = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) e = std::max(e, std::abs(a[k] - b[k]));
  return e;
}

inline double max_abs(const std::vector<double>& a) {
  double e = 0.0;
  for (double v : a) e = std::max(e, std::abs(v));
  return e;
}

}  // namespace testing
