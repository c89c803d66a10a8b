#pragma once

// Hand-rolled random generators shared by the property tests and the
// acceptance run. Each draws from a caller-owned engine so failures replay.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <utility>

#include "support.hpp"

namespace testing {

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline int pick(std::mt19937_64& rng, int n) {
  return std::uniform_int_distribution<int>(0, n - 1)(rng);
}

/// Any admissible coupling: power, quadratic positive part, or a tabulated
/// G' that may start with a flat stretch and always grows in the tail.
inline CouplingSpec gen_coupling(std::mt19937_64& rng) {
  switch (pick(rng, 3)) {
    case 0: return CouplingSpec::power(uniform(rng, 0.2, 3.0), uniform(rng, 1.05, 4.0));
    case 1: return CouplingSpec::quadratic_positive_part();
    default: {
      const int n = 2 + pick(rng, 5);
      std::vector<double> z{uniform(rng, -2.0, 0.0)};
      std::vector<double> d{pick(rng, 2) ? 0.0 : uniform(rng, 0.0, 1.0)};
      for (int k = 1; k < n; ++k) {
        z.push_back(z.back() + uniform(rng, 0.1, 1.0));
        // a repeated slope makes a flat stretch, except on the last segment
        const bool flat = k + 1 < n && pick(rng, 3) == 0;
        d.push_back(d.back() + (flat ? 0.0 : uniform(rng, 0.05, 2.0)));
      }
      return CouplingSpec::tabulated(z, d);
    }
  }
}

/// Range of G' as [lo, infinity).
inline double gprime_floor(const CouplingSpec& c) {
  return c.variant == CouplingSpec::Variant::tabulated ? c.table_slope.front() : 0.0;
}

inline Expr gen_potential(std::mt19937_64& rng) {
  switch (pick(rng, 4)) {
    case 0: return Expr::constant(uniform(rng, -2.0, 2.0));
    case 1: return Expr::sine(uniform(rng, 0.2, 2.0), uniform(rng, 0.5, 2.0),
                              uniform(rng, 0.0, 6.3), uniform(rng, -1.0, 1.0));
    case 2: return Expr::gaussian_bump(uniform(rng, -2.0, 2.0),
                                       {uniform(rng, 0.0, 1.0), uniform(rng, 0.0, 1.0)},
                                       uniform(rng, 0.1, 0.5), uniform(rng, -1.0, 0.5));
    default: return Expr::sin_radius_sq();
  }
}

inline HamiltonianSpec gen_hamiltonian(std::mt19937_64& rng) {
  if (pick(rng, 2)) return HamiltonianSpec::quadratic(gen_potential(rng));
  const double b0 = uniform(rng, 0.5, 2.0);
  return HamiltonianSpec::model(
      uniform(rng, 1.2, 4.0),
      Expr::sum({Expr::constant(b0), Expr::sine(0.4 * b0, uniform(rng, 0.5, 2.0))}),
      gen_potential(rng));
}

inline Vec gen_vec(std::mt19937_64& rng, double scale) {
  return Vec{uniform(rng, -scale, scale), uniform(rng, -scale, scale)};
}

/// 1D or 2D unit-box problem with random data, always passing validation.
inline ProblemSpec gen_problem(std::mt19937_64& rng, int dim) {
  const Expr influx = Expr::constant(uniform(rng, 0.0, 1.5));
  const Expr psi = Expr::linear(uniform(rng, -0.5, 0.5), uniform(rng, -0.5, 0.5),
                                uniform(rng, -0.5, 0.5));
  if (dim == 1) {
    ProblemSpec p = interval_problem(Expr::constant(0.0), 0.0, psi);
    p.coupling = gen_coupling(rng);
    p.hamiltonian = gen_hamiltonian(rng);
    p.boundary.influx = influx;
    return p;
  }
  return square_problem(gen_coupling(rng), gen_hamiltonian(rng), influx, psi);
}

/// Oracle pair with a smooth bump added to u and a relative bump on m, both
/// vanishing on the boundary.
inline std::pair<CellField, Field> perturb(const CellField& m, const Field& u,
                                    std::mt19937_64& rng) {
  std::uniform_real_distribution<double> amp(-0.2, 0.2);
  std::uniform_real_distribution<double> freq(1.0, 3.0);
  const double a = amp(rng), b = amp(rng), k = freq(rng);
  const Grid& g = u.grid;
  auto bump = [&](Point x) {
    const double bx = std::sin(std::numbers::pi * x[0]);
    const double by = g.dim() == 2 ? std::sin(std::numbers::pi * x[1]) : 1.0;
    return bx * by * std::cos(k * (x[0] + x[1]));
  };
  Field v = u;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!g.is_boundary_node(i)) v[i] += a * bump(g.node_point(i));
  }
  CellField e = m;
  for (std::size_t c = 0; c < e.size(); ++c) {
    e[c] = std::max(0.0, e[c] * (1.0 + b * bump(g.cell_center(c))));
  }
  return {e, v};
}

}  // namespace testing
