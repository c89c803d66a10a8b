#pragma once

#include <array>
#include <string>
#include <vector>

namespace mfg {

/// A point of the domain. One-dimensional problems leave the second
/// coordinate at zero.
using Point = std::array<double, 2>;

/// Gradient-like vectors share the point layout.
using Vec = std::array<double, 2>;

enum class Axis { x = 0, y = 1 };

/// Scalar function of position drawn from a fixed catalog.
///
/// Catalog entries are small, closed-form expressions so that problem
/// data (potential, coefficient b, exit cost, influx) can be written in a
/// config file and compared field-by-field after a round trip. `sum` and
/// `product` combine entries.
class Expr {
 public:
  enum class Kind {
    constant,            // value
    sine,                // amplitude * sin(2 pi frequency t + phase) + offset
    gaussian_bump,       // amplitude * exp(-|x - c|^2 / (2 width^2)) + offset
    polynomial,          // sum_k coeffs[k] t^k
    table,               // piecewise-linear interpolation in t, clamped
    linear,              // c0 + cx x + cy y
    exp_trig_potential,  // 3 e^{-pi x} cos(pi y) - pi^2 e^{-2 pi x} / 2
    exp_trig_value,      // scale * e^{-pi x} sin(pi y)
    exp_trig_influx,     // 3 pi [sin(2 pi y)]^+ / 2
    sin_radius_sq,       // sin(|x|^2)
    sum,
    product,
    positive_part,
  };

  Expr() : Expr(constant(0.0)) {}

  static Expr constant(double value);
  static Expr sine(double amplitude, double frequency, double phase = 0.0,
                   double offset = 0.0, Axis axis = Axis::x);
  static Expr gaussian_bump(double amplitude, Point center, double width,
                            double offset = 0.0);
  static Expr polynomial(std::vector<double> coeffs, Axis axis = Axis::x);
  static Expr table(std::vector<double> nodes, std::vector<double> values,
                    Axis axis = Axis::x);
  static Expr linear(double c0, double cx, double cy = 0.0);
  static Expr exp_trig_potential();
  static Expr exp_trig_value(double scale = 1.0);
  static Expr exp_trig_influx();
  static Expr sin_radius_sq();
  static Expr sum(std::vector<Expr> terms);
  static Expr product(std::vector<Expr> factors);
  static Expr positive_part(Expr inner);

  double operator()(Point x) const;
  double operator()(double x) const { return (*this)(Point{x, 0.0}); }

  Kind kind() const { return kind_; }
  Axis axis() const { return axis_; }
  const std::vector<double>& params() const { return params_; }
  const std::vector<double>& nodes() const { return nodes_; }
  const std::vector<Expr>& children() const { return children_; }

  /// True when the expression is a `constant` entry.
  bool is_constant() const { return kind_ == Kind::constant; }

  bool operator==(const Expr&) const = default;

 private:
  Expr(Kind kind, std::vector<double> params, Axis axis = Axis::x)
      : kind_(kind), axis_(axis), params_(std::move(params)) {}

  Kind kind_;
  Axis axis_ = Axis::x;
  std::vector<double> params_;
  std::vector<double> nodes_;  // table abscissae
  std::vector<Expr> children_;
};

std::string to_string(Expr::Kind kind);
Expr::Kind expr_kind_from_string(const std::string& name);

}  // namespace mfg
