#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mfg/grid.hpp"
#include "mfg/model.hpp"

namespace mfg {

struct Thresholds {
  double hj_residual_pos = 1e-6;
  double hj_inequality = 1e-6;
  double continuity = 1e-6;
  double neumann = 1e-6;
  double dirichlet_sign = 1e-6;
  double complementarity = 1e-6;
  double mass_balance = 1e-6;

  bool operator==(const Thresholds&) const = default;
};

/// Normal traces are weak: at boundary node i the flux pairing
/// r_i = sum_c |c| F_c . grad phi_i(x_c) (minus the Neumann load carried by
/// the node) is divided by the node's boundary weight.
struct DiagnosticsReport {
  double eps_m = 0.0;
  /// max |H(x, Du) - g(m)| over cells with m > eps_m.
  double hj_residual_pos = 0.0;
  /// max (H(x, Du) - g(m))^+ over all cells.
  double hj_inequality_violation = 0.0;
  /// max |r_i| / int phi_i over interior nodes: the pairing per unit mass of
  /// the test function, in the units of the optimizer tolerance.
  double continuity_residual = 0.0;
  /// max |flux . nu - j| over Neumann nodes.
  double neumann_error = 0.0;
  /// max (flux . nu)^+ over Dirichlet nodes.
  double dirichlet_sign_violation = 0.0;
  /// max |(psi - u) flux . nu| over Dirichlet nodes.
  double complementarity_residual = 0.0;
  /// |outflux through Gamma_D + influx through Gamma_N|.
  double mass_balance_gap = 0.0;
  /// int m g(m) + (m + 1) |Du|^beta.
  double apriori_energy = 0.0;
  double integral_m_conjugate = 0.0;   // int m^{alpha'}
  double integral_g_power = 0.0;       // int |g(m)|^alpha
  double integral_flux_conjugate = 0.0;  // int |m D_pH|^{gamma'}
  /// max |flux . nu| across the free boundary (0 in 1D).
  double free_boundary_flux = 0.0;
  Thresholds thresholds;

  struct Check {
    std::string name;
    double value;
    double threshold;
    bool passed;
  };
  std::vector<Check> checks() const;
  bool passed() const;
};

/// Throws std::invalid_argument when m and u live on different grids or the
/// grid does not match the problem's dimension.
DiagnosticsReport check_weak_solution(const ProblemSpec& problem,
                                      const CellField& m, const Field& u,
                                      std::optional<double> eps_m = {},
                                      const Thresholds& thresholds = {});

/// 1e-6 * max(max m, 1).
double default_eps_m(const CellField& m);

double apriori_energy(const ProblemSpec& problem, const CellField& m,
                      const Field& u);

struct MonotonicityResult {
  double I1 = 0.0;  // boundary term
  double I2 = 0.0;  // convexity of H
  double I3 = 0.0;  // monotonicity of g
  double total = 0.0;
};

/// Splits the discrete pairing of the two pairs into boundary, Hamiltonian
/// and coupling parts; total equals the pairing exactly.
MonotonicityResult monotonicity_gap(const ProblemSpec& problem,
                                    const CellField& m, const Field& u,
                                    const CellField& eta, const Field& xi);

struct UniquenessOptions {
  double m_tol = 1e-5;
  double du_tol = 1e-4;
  /// Report inconclusive unless both pairs pass check_weak_solution.
  bool require_solutions = true;
  Thresholds thresholds;
};

struct UniquenessFindings {
  enum class Status { consistent, violation, inconclusive };
  Status status = Status::consistent;
  double m_gap = 0.0;
  double du_gap = 0.0;
  /// Cells with min(m, eta) > eps_m.
  std::size_t positive_cells = 0;
  std::vector<std::string> messages;
};

std::string to_string(UniquenessFindings::Status s);

UniquenessFindings uniqueness_check(const ProblemSpec& problem,
                                    const CellField& m, const Field& u,
                                    const CellField& eta, const Field& xi,
                                    std::optional<double> eps_m = {},
                                    const UniquenessOptions& opts = {});

struct FreeBoundaryResult {
  struct Interface {
    std::size_t positive_cell;
    std::size_t empty_cell;
    Vec normal;  // from the positive cell towards the empty one
  };
  std::vector<Interface> interfaces;
  double max_flux = 0.0;
};

/// Throws std::invalid_argument on a 1D grid.
FreeBoundaryResult free_boundary_flux(const ProblemSpec& problem,
                                      const CellField& m, const Field& u,
                                      std::optional<double> eps_m = {});

}  // namespace mfg
