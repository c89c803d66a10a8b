#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "mfg/expr.hpp"

namespace mfg {

// ---------------------------------------------------------------------------
// Coupling G (potential of the congestion coupling) and its pseudo-inverse g.
// ---------------------------------------------------------------------------

struct CouplingSpec {
  enum class Variant { power, quadratic_positive_part, tabulated };

  Variant variant = Variant::quadratic_positive_part;
  double a = 1.0;      // power amplitude
  double alpha = 2.0;  // growth exponent
  // Tabulated variant: G' is piecewise linear through (table_z[k],
  // table_slope[k]), constant to the left of the first node and extended with
  // the last segment's slope to the right. G(table_z[0]) = 0.
  std::vector<double> table_z;
  std::vector<double> table_slope;

  /// G(z) = a (z + 1)^alpha for z >= -1, zero below.
  static CouplingSpec power(double a, double alpha);
  /// G(z) = (z^+)^2 / 2, so that g(m) = m.
  static CouplingSpec quadratic_positive_part();
  static CouplingSpec tabulated(std::vector<double> z,
                                std::vector<double> slope, double alpha = 2.0);

  bool operator==(const CouplingSpec&) const = default;
};

double coupling_G(const CouplingSpec& spec, double z);
double coupling_Gprime(const CouplingSpec& spec, double z);

/// Pseudo-inverse of G': max{z : G'(z) = mu}. Throws std::domain_error when
/// mu is outside the range of G'.
double coupling_g(const CouplingSpec& spec, double mu);

/// G(z + dz) - G(z), evaluated without cancellation when dz is small.
double coupling_change(const CouplingSpec& spec, double z, double dz);

/// Right end z1 of the flat region {G' = 0}, if G' vanishes anywhere.
std::optional<double> coupling_flat_end(const CouplingSpec& spec);

std::string to_string(CouplingSpec::Variant v);
CouplingSpec::Variant coupling_variant_from_string(const std::string& name);

// ---------------------------------------------------------------------------
// Hamiltonian H(x, p).
// ---------------------------------------------------------------------------

struct HamiltonianSpec {
  enum class Variant { quadratic, model };

  Variant variant = Variant::quadratic;
  double beta = 2.0;                    // model growth exponent
  Expr b = Expr::constant(1.0);         // model coefficient, positive
  Expr potential = Expr::constant(0.0);  // V(x)

  /// |p|^2 / 2 + V(x).
  static HamiltonianSpec quadratic(Expr potential);
  /// b(x) [(|p|^2 + 1)^{beta/2} - 1] + V(x); the reference potential is
  /// sin(|x|^2).
  static HamiltonianSpec model(double beta, Expr b,
                               Expr potential = Expr::sin_radius_sq());

  /// Growth exponent in p (2 for the quadratic variant).
  double growth() const { return variant == Variant::quadratic ? 2.0 : beta; }

  bool operator==(const HamiltonianSpec&) const = default;
};

/// Position-dependent coefficients of H sampled at one point.
struct LocalCoefficients {
  double b = 1.0;
  double potential = 0.0;
};

LocalCoefficients local_coefficients(const HamiltonianSpec& spec, Point x);

double hamiltonian_value(const HamiltonianSpec& spec, LocalCoefficients c,
                         Vec p);
Vec hamiltonian_gradient(const HamiltonianSpec& spec, LocalCoefficients c,
                         Vec p);
/// H(x, p + dp) - H(x, p) without cancellation.
double hamiltonian_change(const HamiltonianSpec& spec, LocalCoefficients c,
                          Vec p, Vec dp);

double hamiltonian_H(const HamiltonianSpec& spec, Point x, Vec p);
Vec hamiltonian_DpH(const HamiltonianSpec& spec, Point x, Vec p);

std::string to_string(HamiltonianSpec::Variant v);
HamiltonianSpec::Variant hamiltonian_variant_from_string(
    const std::string& name);

// ---------------------------------------------------------------------------
// Domain, boundary partition and the full problem.
// ---------------------------------------------------------------------------

struct Domain {
  int dim = 1;
  Point lo{0.0, 0.0};
  Point hi{1.0, 0.0};

  static Domain interval(double lo, double hi);
  static Domain rectangle(double x_lo, double x_hi, double y_lo, double y_hi);

  bool contains(Point x, double slack = 1e-12) const;

  bool operator==(const Domain&) const = default;
};

enum class BoundaryKind { neumann, dirichlet };

/// Faces of an interval (left, right) or rectangle (all four).
enum class Face { left = 0, right = 1, bottom = 2, top = 3 };

std::string to_string(Face f);
Face face_from_string(const std::string& name);
std::string to_string(BoundaryKind k);

struct BoundarySpec {
  std::array<std::optional<BoundaryKind>, 4> faces{};
  Expr influx = Expr::constant(0.0);     // j on the Neumann part
  Expr exit_cost = Expr::constant(0.0);  // psi on the closure of the domain

  BoundarySpec& set(Face f, BoundaryKind k) {
    faces[static_cast<std::size_t>(f)] = k;
    return *this;
  }
  std::optional<BoundaryKind> kind(Face f) const {
    return faces[static_cast<std::size_t>(f)];
  }

  bool operator==(const BoundarySpec&) const = default;
};

/// Faces that exist for a domain of the given dimension.
std::vector<Face> domain_faces(int dim);

struct ProblemSpec {
  Domain domain;
  CouplingSpec coupling;
  HamiltonianSpec hamiltonian;
  BoundarySpec boundary;

  /// Sobolev exponent alpha * beta of the admissible space.
  double gamma() const { return coupling.alpha * hamiltonian.growth(); }

  bool operator==(const ProblemSpec&) const = default;
};

/// Domain-checked evaluation; throws std::domain_error outside the closure.
double hamiltonian_H(const ProblemSpec& problem, Point x, Vec p);
Vec hamiltonian_DpH(const ProblemSpec& problem, Point x, Vec p);

// ---------------------------------------------------------------------------
// Assumption validation.
// ---------------------------------------------------------------------------

struct ValidationReport {
  std::vector<std::string> findings;
  /// min(min b, 1 / max b) over the sampled domain.
  double delta = 0.0;
  /// Smallest sampled C with -H + D_pH p >= |p|^beta / C - C, or NaN when no
  /// C up to 1e6 works.
  double lagrangian_constant = 0.0;

  bool ok() const { return findings.empty(); }
};

/// Sampling-based check of the structural assumptions on G, H, j, psi and
/// the boundary partition. Sample counts are fixed constants in the
/// implementation (1000 random convexity pairs, 33 points per axis for
/// coefficient fields, 101 points per Neumann face).
ValidationReport validate_spec(const ProblemSpec& problem);

}  // namespace mfg
