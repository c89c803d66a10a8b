#pragma once

#include <complex>
#include <string>
#include <vector>

#include "mfg/expr.hpp"
#include "mfg/grid.hpp"
#include "mfg/model.hpp"

namespace mfg {

/// gamma = -(3/2) j0^{2/3}: below it the positive-flux density is set by the
/// potential rather than by the current.
double flux_threshold(double j0);

/// Unique positive root of m^3 - V m^2 - j0^2 / 2 = 0 (it exceeds max(0, V)).
/// Throws std::domain_error for j0 <= 0 or non-finite input.
double cubic_positive_root(double V, double j0);

enum class Branch { plus, minus };

/// Closed-form solution of the 1D problem on [lo, hi] with the Neumann end
/// at lo and the Dirichlet end at hi, quadratic Hamiltonian and g(m) = m.
class Oracle1D {
 public:
  /// Zero current: m = max(0, V), u_x = -/+ sqrt(-2 min(0, V)), u(hi) = 0.
  static Oracle1D zero_flux(Expr potential);
  /// Positive current j0: m from the cubic, u_x = -j0 / m, u(hi) = anchor.
  static Oracle1D positive_flux(Expr potential, double j0, double anchor = 0.0);

  double j0() const { return j0_; }
  const Expr& potential() const { return potential_; }

  double m(double x) const;
  /// Derivative of u; for j0 = 0 the branch picks the sign.
  double ux(double x, Branch branch = Branch::plus) const;

  Field m_nodes(const Grid& grid) const;
  CellField m_cells(const Grid& grid) const;
  /// u at the nodes by composite trapezoid integration of ux from hi.
  Field u(const Grid& grid, Branch branch = Branch::plus) const;

  /// Largest relative gap between -j0 / m and -sqrt(2 (m - V)) over the
  /// grid nodes (zero for j0 = 0).
  double ux_consistency_gap(const Grid& grid) const;

 private:
  Oracle1D(Expr potential, double j0, double anchor)
      : potential_(std::move(potential)), j0_(j0), anchor_(anchor) {}

  Expr potential_;
  double j0_;
  double anchor_;
};

/// The exponential-trigonometric example on the unit square: Neumann on the
/// left and top faces, Dirichlet on the right and bottom faces, quadratic
/// Hamiltonian, g(m) = m.
ProblemSpec exponential_problem();

struct ExponentialOracle {
  Field u;         // e^{-pi x} sin(pi y)
  Field m_nodes;   // 3 e^{-pi x} [cos(pi y)]^+
  CellField m;     // same at cell centroids
  CellField V;     // potential at cell centroids
  Field j;         // influx at the nodes (zero off the Neumann faces)
  Field psi;       // exit cost at the nodes
};

/// Throws std::invalid_argument unless the grid covers the unit square.
ExponentialOracle oracle_2d_exponential(const Grid& grid);

/// Holomorphic f = u + i v from a fixed catalog, scaled by `scale`.
struct HolomorphicFunction {
  enum class Kind { identity, square, cube, i_exp_neg_pi, polynomial };

  Kind kind = Kind::square;
  /// Density multiplier: the density is scale * (Im f)^+.
  double density_scale = 1.0;
  /// Coefficients c_0, c_1, ... for Kind::polynomial.
  std::vector<std::complex<double>> coeffs;

  std::complex<double> value(std::complex<double> z) const;
  std::complex<double> derivative(std::complex<double> z) const;

  static HolomorphicFunction named(const std::string& name,
                                   double density_scale = 1.0);
};

struct HolomorphicExample {
  HolomorphicFunction f;
  double q = 1.0;
  Field u;                   // Re f at the nodes
  CellField m_tilde;         // density_scale * (Im f)^+ at centroids
  CellField V;               // m_tilde^{1/q} - |grad u|^2 / 2 at centroids
  CellVectorField grad_u;    // exact grad u at centroids
};

/// Throws std::invalid_argument for q <= 0 or a 1D grid.
HolomorphicExample generate_holomorphic_example(const HolomorphicFunction& f,
                                                double q, const Grid& grid);

}  // namespace mfg
