#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <stdexcept>
#include <vector>

#include "mfg/grid.hpp"
#include "mfg/model.hpp"

namespace mfg {

/// Thrown when the objective is asked to evaluate a non-finite field.
class EvaluationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct DensityFields {
  CellField m;
  CellVectorField flux;  // m * D_pH(x_c, Du_c)
  Field m_nodal;         // mean of adjacent cell values, for output
};

/// Discrete objective
///   I[w] = sum_c |c| G(H(x_c, Dw_c)) - sum_i j_i wN_i w_i,
/// where wN_i is the Neumann trapezoid weight of node i.
class Objective {
 public:
  /// Throws std::invalid_argument if the boundary partition is invalid or
  /// j is negative at a Neumann node.
  Objective(ProblemSpec problem, Grid grid);

  const ProblemSpec& problem() const { return problem_; }
  const Grid& grid() const { return grid_; }
  const BoundaryClass& boundary() const { return boundary_; }
  /// psi sampled at every node.
  const Field& exit_cost() const { return psi_; }
  /// j sampled at every node (zero away from Gamma_N).
  const Field& influx() const { return j_; }
  /// j_i * wN_i.
  const std::vector<double>& influx_weights() const { return jw_; }
  const std::vector<LocalCoefficients>& cell_coefficients() const {
    return coeff_;
  }

  /// Diagonal metric used by the optimizer: hat-function volume at interior
  /// nodes, boundary weight at boundary nodes.
  std::vector<double> node_scale() const;

  double evaluate(const Field& w) const;
  double evaluate(std::span<const double> w) const;

  Field gradient(const Field& w) const;
  void gradient(std::span<const double> w, std::span<double> out) const;

  /// I[w + step] - I[w] without cancellation between the two totals.
  double evaluate_change(std::span<const double> w,
                         std::span<const double> step) const;

  DensityFields recover_density(const Field& u) const;

 private:
  void check(std::span<const double> w) const;

  ProblemSpec problem_;
  Grid grid_;
  BoundaryClass boundary_;
  Field psi_;
  Field j_;
  std::vector<double> jw_;
  std::vector<LocalCoefficients> coeff_;
};

/// Low-frequency sine modes plus small uniform noise, amplitude O(1).
Field random_smooth_field(const Grid& grid, std::mt19937_64& rng);

struct GradientAudit {
  /// max over fields of |grad - fd|_inf / max(|grad|_inf, |fd|_inf).
  double max_relative_error = 0.0;
  std::vector<double> per_field;
};

/// Compares `Objective::gradient` with central differences of
/// `Objective::evaluate` at `fields` random smooth fields.
GradientAudit gradient_audit(const Objective& obj, int fields,
                             std::uint64_t seed, double step = 1e-6);

}  // namespace mfg
