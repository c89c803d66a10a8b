#pragma once

#include <cmath>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "mfg/functional.hpp"
#include "mfg/grid.hpp"

namespace mfg {

enum class InitMode { psi, zeros, given };

enum class Termination {
  converged,
  objective_stall,
  gradient_plateau,
  line_search_stall,
  max_iterations,
};

std::string to_string(InitMode m);
InitMode init_mode_from_string(const std::string& name);
std::string to_string(Termination t);

struct SolveOptions {
  int max_iters = 5000;
  /// Tolerance on the scaled projected-gradient L-infinity norm.
  double tol_pg = 1e-8;
  /// Relative objective decrease below which `stall_window` iterations
  /// without a new best projected gradient count as a stall.
  double tol_f = 1e-12;
  int stall_window = 20;
  /// Iterations without a new best projected gradient before giving up.
  int plateau_window = 200;
  double armijo_c = 1e-4;
  double shrink = 0.5;
  double initial_step = 1.0;
  double min_step = 1e-16;
  double bb_min = 1e-12;
  double bb_max = 1e12;
  /// Upper bound on the distance to psi within which a Dirichlet node whose
  /// gradient points outward is held at its bound.
  double binding_tolerance = 1e-3;
  InitMode init = InitMode::psi;
  /// Starting values for InitMode::given (one per node).
  std::vector<double> initial;

  /// Throws std::invalid_argument for non-positive tolerances and the like.
  void validate() const;

  bool operator==(const SolveOptions&) const = default;
};

struct SolveReport {
  int iterations = 0;
  int evaluations = 0;
  double objective = 0.0;
  double pg_norm = 0.0;
  bool converged = false;
  Termination reason = Termination::max_iterations;
  /// Dirichlet nodes with u == psi.
  std::vector<std::size_t> active_set;
  std::vector<double> history;
};

struct SolveResult {
  Field u;
  DensityFields density;
  SolveReport report;
};

/// Raised when the objective turns non-finite during a solve.
class SolveError : public std::runtime_error {
 public:
  SolveError(const std::string& what, int iteration, std::vector<double> iterate)
      : std::runtime_error(what), iteration(iteration), iterate(std::move(iterate)) {}

  int iteration;
  std::vector<double> iterate;
};

/// min(w, psi) at Dirichlet nodes; every other node untouched.
Field project(const Field& w, const Field& psi, const BoundaryClass& boundary);
void project_in_place(std::span<double> w, std::span<const double> psi,
                      const BoundaryClass& boundary);

/// max_i |w_i - P(w_i - g_i / s_i)|.
double projected_gradient_norm(std::span<const double> w,
                               std::span<const double> grad,
                               std::span<const double> scale,
                               std::span<const double> psi,
                               const BoundaryClass& boundary);

struct LineSearchOptions {
  double c = 1e-4;
  double shrink = 0.5;
  double min_step = 1e-16;
};

struct LineSearchResult {
  double step = 0.0;
  bool stalled = false;
  std::vector<double> iterate;
  /// Objective change from w to the accepted iterate.
  double change = 0.0;
  int evaluations = 0;
};

/// Backtracking along the projected path P(w + t d), t = step0, step0 *
/// shrink, ... Accepts the first t with
///   f(P(w + t d)) - f(w) <= c * sum_{free i} g_i (P(w + t d) - w)_i,
/// where a node is free when the projection leaves it unchanged. `change`
/// maps a step s to f(w + s) - f(w); `project` clips a vector in place.
/// Signals a stall when the projected path is not a descent path or t drops
/// below min_step.
template <class Change, class Project>
LineSearchResult projected_armijo(Change&& change, Project&& project,
                                  std::span<const double> w,
                                  std::span<const double> grad,
                                  std::span<const double> direction,
                                  double step0,
                                  const LineSearchOptions& opts = {}) {
  LineSearchResult r;
  r.iterate.assign(w.begin(), w.end());
  bool zero = true;
  for (double g : grad) zero = zero && g == 0.0;
  if (zero) {
    r.step = step0;
    return r;
  }
  const std::size_t n = w.size();
  std::vector<double> raw(n);
  std::vector<double> trial(n);
  std::vector<double> step(n);
  for (double t = step0; t >= opts.min_step; t *= opts.shrink) {
    for (std::size_t i = 0; i < n; ++i) raw[i] = w[i] + t * direction[i];
    trial = raw;
    project(std::span<double>(trial));
    double slope = 0.0;
    double free_slope = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      step[i] = trial[i] - w[i];
      slope += grad[i] * step[i];
      if (trial[i] == raw[i]) free_slope += grad[i] * step[i];
    }
    if (!(slope < 0.0)) break;
    const double delta = change(std::span<const double>(step));
    ++r.evaluations;
    if (free_slope < 0.0 && delta <= opts.c * free_slope) {
      r.step = t;
      r.iterate = std::move(trial);
      r.change = delta;
      return r;
    }
  }
  r.stalled = true;
  return r;
}

/// Convenience wrapper over the objective and its Dirichlet projection.
LineSearchResult line_search(const Objective& obj, std::span<const double> w,
                             std::span<const double> direction, double step0,
                             const LineSearchOptions& opts = {});

/// Projected Barzilai-Borwein descent with monotone Armijo backtracking.
/// Two-metric scheme: Dirichlet nodes held at their bound use the diagonal
/// `Objective::node_scale`, all other nodes the grid stiffness matrix
/// shifted by that scale.
SolveResult solve(const Objective& obj, const SolveOptions& opts = {});

}  // namespace mfg
