#include "mfg/expr.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace mfg {

namespace {

constexpr double pi = std::numbers::pi;

double coordinate(Point x, Axis axis) {
  return x[static_cast<std::size_t>(axis)];
}

}  // namespace

Expr Expr::constant(double value) { return Expr(Kind::constant, {value}); }

Expr Expr::sine(double amplitude, double frequency, double phase,
                double offset, Axis axis) {
  return Expr(Kind::sine, {amplitude, frequency, phase, offset}, axis);
}

Expr Expr::gaussian_bump(double amplitude, Point center, double width,
                         double offset) {
  if (!(width > 0.0)) {
    throw std::invalid_argument("gaussian_bump: width must be positive");
  }
  return Expr(Kind::gaussian_bump,
              {amplitude, center[0], center[1], width, offset});
}

Expr Expr::polynomial(std::vector<double> coeffs, Axis axis) {
  if (coeffs.empty()) {
    throw std::invalid_argument("polynomial: at least one coefficient");
  }
  return Expr(Kind::polynomial, std::move(coeffs), axis);
}

Expr Expr::table(std::vector<double> nodes, std::vector<double> values,
                 Axis axis) {
  if (nodes.size() < 2 || nodes.size() != values.size()) {
    throw std::invalid_argument(
        "table: need at least two nodes and one value per node");
  }
  if (!std::is_sorted(nodes.begin(), nodes.end()) ||
      std::adjacent_find(nodes.begin(), nodes.end()) != nodes.end()) {
    throw std::invalid_argument("table: nodes must be strictly increasing");
  }
  Expr e(Kind::table, std::move(values), axis);
  e.nodes_ = std::move(nodes);
  return e;
}

Expr Expr::linear(double c0, double cx, double cy) {
  return Expr(Kind::linear, {c0, cx, cy});
}

Expr Expr::exp_trig_potential() { return Expr(Kind::exp_trig_potential, {}); }

Expr Expr::exp_trig_value(double scale) {
  return Expr(Kind::exp_trig_value, {scale});
}

Expr Expr::exp_trig_influx() { return Expr(Kind::exp_trig_influx, {}); }

Expr Expr::sin_radius_sq() { return Expr(Kind::sin_radius_sq, {}); }

Expr Expr::sum(std::vector<Expr> terms) {
  if (terms.empty()) throw std::invalid_argument("sum: no terms");
  Expr e(Kind::sum, {});
  e.children_ = std::move(terms);
  return e;
}

Expr Expr::product(std::vector<Expr> factors) {
  if (factors.empty()) throw std::invalid_argument("product: no factors");
  Expr e(Kind::product, {});
  e.children_ = std::move(factors);
  return e;
}

Expr Expr::positive_part(Expr inner) {
  Expr e(Kind::positive_part, {});
  e.children_.push_back(std::move(inner));
  return e;
}

double Expr::operator()(Point x) const {
  switch (kind_) {
    case Kind::constant:
      return params_[0];
    case Kind::sine: {
      const double t = coordinate(x, axis_);
      return params_[0] * std::sin(2.0 * pi * params_[1] * t + params_[2]) +
             params_[3];
    }
    case Kind::gaussian_bump: {
      const double dx = x[0] - params_[1];
      const double dy = x[1] - params_[2];
      const double w = params_[3];
      return params_[0] * std::exp(-(dx * dx + dy * dy) / (2.0 * w * w)) +
             params_[4];
    }
    case Kind::polynomial: {
      const double t = coordinate(x, axis_);
      double acc = 0.0;
      for (auto it = params_.rbegin(); it != params_.rend(); ++it) {
        acc = acc * t + *it;
      }
      return acc;
    }
    case Kind::table: {
      const double t = coordinate(x, axis_);
      if (t <= nodes_.front()) return params_.front();
      if (t >= nodes_.back()) return params_.back();
      const auto hi = std::upper_bound(nodes_.begin(), nodes_.end(), t);
      const auto k = static_cast<std::size_t>(hi - nodes_.begin());
      const double s = (t - nodes_[k - 1]) / (nodes_[k] - nodes_[k - 1]);
      return (1.0 - s) * params_[k - 1] + s * params_[k];
    }
    case Kind::linear:
      return params_[0] + params_[1] * x[0] + params_[2] * x[1];
    case Kind::exp_trig_potential:
      return 3.0 * std::exp(-pi * x[0]) * std::cos(pi * x[1]) -
             0.5 * pi * pi * std::exp(-2.0 * pi * x[0]);
    case Kind::exp_trig_value:
      return params_[0] * std::exp(-pi * x[0]) * std::sin(pi * x[1]);
    case Kind::exp_trig_influx:
      return 1.5 * pi * std::max(0.0, std::sin(2.0 * pi * x[1]));
    case Kind::sin_radius_sq:
      return std::sin(x[0] * x[0] + x[1] * x[1]);
    case Kind::sum: {
      double acc = 0.0;
      for (const auto& c : children_) acc += c(x);
      return acc;
    }
    case Kind::product: {
      double acc = 1.0;
      for (const auto& c : children_) acc *= c(x);
      return acc;
    }
    case Kind::positive_part:
      return std::max(0.0, children_[0](x));
  }
  return 0.0;
}

std::string to_string(Expr::Kind kind) {
  switch (kind) {
    case Expr::Kind::constant: return "constant";
    case Expr::Kind::sine: return "sine";
    case Expr::Kind::gaussian_bump: return "gaussian_bump";
    case Expr::Kind::polynomial: return "polynomial";
    case Expr::Kind::table: return "table";
    case Expr::Kind::linear: return "linear";
    case Expr::Kind::exp_trig_potential: return "exp_trig_potential";
    case Expr::Kind::exp_trig_value: return "exp_trig_value";
    case Expr::Kind::exp_trig_influx: return "exp_trig_influx";
    case Expr::Kind::sin_radius_sq: return "sin_radius_sq";
    case Expr::Kind::sum: return "sum";
    case Expr::Kind::product: return "product";
    case Expr::Kind::positive_part: return "positive_part";
  }
  return "unknown";
}

Expr::Kind expr_kind_from_string(const std::string& name) {
  static constexpr Expr::Kind all[] = {
      Expr::Kind::constant,           Expr::Kind::sine,
      Expr::Kind::gaussian_bump,      Expr::Kind::polynomial,
      Expr::Kind::table,              Expr::Kind::linear,
      Expr::Kind::exp_trig_potential, Expr::Kind::exp_trig_value,
      Expr::Kind::exp_trig_influx,    Expr::Kind::sin_radius_sq,
      Expr::Kind::sum,                Expr::Kind::product,
      Expr::Kind::positive_part};
  for (auto k : all) {
    if (to_string(k) == name) return k;
  }
  throw std::invalid_argument("unknown expression kind '" + name + "'");
}

}  // namespace mfg
