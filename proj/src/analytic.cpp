#include "mfg/analytic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace mfg {

namespace {

constexpr double pi = std::numbers::pi;

double cubic(double m, double V, double c) { return m * m * (m - V) - c; }

}  // namespace

double flux_threshold(double j0) { return -1.5 * std::cbrt(j0 * j0); }

double cubic_positive_root(double V, double j0) {
  if (!(j0 > 0.0) || !std::isfinite(j0) || !std::isfinite(V)) {
    throw std::domain_error("cubic_positive_root: need finite V and j0 > 0");
  }
  const double c = 0.5 * j0 * j0;
  // p(m) = m^2 (m - V) - c is negative at max(0, V) and positive at hi.
  double lo = std::max(0.0, V);
  double hi = lo + std::cbrt(c) + 1.0;
  while (cubic(hi, V, c) <= 0.0) hi = lo + 2.0 * (hi - lo);
  double m = 0.5 * (lo + hi);
  for (int it = 0; it < 200; ++it) {
    const double p = cubic(m, V, c);
    if (p == 0.0) break;
    (p < 0.0 ? lo : hi) = m;
    const double dp = m * (3.0 * m - 2.0 * V);
    double next = dp > 0.0 ? m - p / dp : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - m) <= 1e-16 * std::max(1.0, std::abs(m)) ||
        hi - lo <= 4e-16 * std::max(1.0, std::abs(m))) {
      m = next;
      break;
    }
    m = next;
  }
  return m;
}

// ---------------------------------------------------------------------------

Oracle1D Oracle1D::zero_flux(Expr potential) {
  return Oracle1D(std::move(potential), 0.0, 0.0);
}

Oracle1D Oracle1D::positive_flux(Expr potential, double j0, double anchor) {
  if (!(j0 > 0.0)) {
    throw std::domain_error("positive-flux oracle: j0 must be positive");
  }
  return Oracle1D(std::move(potential), j0, anchor);
}

double Oracle1D::m(double x) const {
  const double V = potential_(x);
  return j0_ > 0.0 ? cubic_positive_root(V, j0_) : std::max(0.0, V);
}

double Oracle1D::ux(double x, Branch branch) const {
  if (j0_ > 0.0) return -j0_ / m(x);
  const double speed = std::sqrt(-2.0 * std::min(0.0, potential_(x)));
  return branch == Branch::plus ? -speed : speed;
}

Field Oracle1D::m_nodes(const Grid& grid) const {
  Field out(grid);
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = m(grid.node_point(k)[0]);
  return out;
}

CellField Oracle1D::m_cells(const Grid& grid) const {
  CellField out(grid);
  for (std::size_t c = 0; c < out.size(); ++c) {
    out[c] = m(grid.cell_center(c)[0]);
  }
  return out;
}

Field Oracle1D::u(const Grid& grid, Branch branch) const {
  if (grid.dim() != 1) {
    throw std::invalid_argument("1D oracle: grid must be one-dimensional");
  }
  Field out(grid);
  const std::size_t n = out.size();
  const double h = grid.spacing(0);
  out[n - 1] = anchor_;
  double next = ux(grid.node_point(n - 1)[0], branch);
  for (std::size_t k = n - 1; k-- > 0;) {
    const double here = ux(grid.node_point(k)[0], branch);
    out[k] = out[k + 1] - 0.5 * h * (here + next);
    next = here;
  }
  return out;
}

double Oracle1D::ux_consistency_gap(const Grid& grid) const {
  if (j0_ <= 0.0) return 0.0;
  double gap = 0.0;
  for (std::size_t k = 0; k < grid.node_count(); ++k) {
    const double x = grid.node_point(k)[0];
    const double mk = m(x);
    const double a = -j0_ / mk;
    const double b = -std::sqrt(2.0 * std::max(0.0, mk - potential_(x)));
    gap = std::max(gap, std::abs(a - b) / std::max(std::abs(a), 1e-300));
  }
  return gap;
}

// ---------------------------------------------------------------------------

ProblemSpec exponential_problem() {
  ProblemSpec p;
  p.domain = Domain::rectangle(0.0, 1.0, 0.0, 1.0);
  p.coupling = CouplingSpec::quadratic_positive_part();
  p.hamiltonian = HamiltonianSpec::quadratic(Expr::exp_trig_potential());
  p.boundary.set(Face::left, BoundaryKind::neumann)
      .set(Face::top, BoundaryKind::neumann)
      .set(Face::right, BoundaryKind::dirichlet)
      .set(Face::bottom, BoundaryKind::dirichlet);
  p.boundary.influx = Expr::exp_trig_influx();
  p.boundary.exit_cost = Expr::exp_trig_value(1.0);
  return p;
}

ExponentialOracle oracle_2d_exponential(const Grid& grid) {
  if (grid.dim() != 2 || grid.lo() != Point{0.0, 0.0} ||
      grid.hi() != Point{1.0, 1.0}) {
    throw std::invalid_argument(
        "exponential oracle: grid must cover the unit square");
  }
  auto density = [](Point x) {
    return 3.0 * std::exp(-pi * x[0]) * std::max(0.0, std::cos(pi * x[1]));
  };
  const ProblemSpec p = exponential_problem();
  Field m_nodes(grid);
  for (std::size_t k = 0; k < m_nodes.size(); ++k) {
    m_nodes[k] = density(grid.node_point(k));
  }
  CellField m(grid);
  for (std::size_t c = 0; c < m.size(); ++c) m[c] = density(grid.cell_center(c));
  const BoundaryClass bc = classify_boundary(grid, p.boundary);
  Field j(grid);
  for (std::size_t k : bc.boundary_nodes) {
    if (bc.neumann_weight[k] > 0.0) j[k] = p.boundary.influx(grid.node_point(k));
  }
  return ExponentialOracle{sample_nodes(grid, Expr::exp_trig_value(1.0)),
                           std::move(m_nodes),
                           std::move(m),
                           sample_cells(grid, p.hamiltonian.potential),
                           std::move(j),
                           sample_nodes(grid, p.boundary.exit_cost)};
}

// ---------------------------------------------------------------------------

std::complex<double> HolomorphicFunction::value(std::complex<double> z) const {
  using namespace std::complex_literals;
  switch (kind) {
    case Kind::identity: return z;
    case Kind::square: return z * z;
    case Kind::cube: return z * z * z;
    case Kind::i_exp_neg_pi: return 1i * std::exp(-pi * z);
    case Kind::polynomial: {
      std::complex<double> acc = 0.0;
      for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) {
        acc = acc * z + *it;
      }
      return acc;
    }
  }
  return 0.0;
}

std::complex<double> HolomorphicFunction::derivative(
    std::complex<double> z) const {
  using namespace std::complex_literals;
  switch (kind) {
    case Kind::identity: return 1.0;
    case Kind::square: return 2.0 * z;
    case Kind::cube: return 3.0 * z * z;
    case Kind::i_exp_neg_pi: return -pi * 1i * std::exp(-pi * z);
    case Kind::polynomial: {
      std::complex<double> acc = 0.0;
      for (std::size_t k = coeffs.size(); k-- > 1;) {
        acc = acc * z + static_cast<double>(k) * coeffs[k];
      }
      return acc;
    }
  }
  return 0.0;
}

HolomorphicFunction HolomorphicFunction::named(const std::string& name,
                                               double density_scale) {
  HolomorphicFunction f;
  f.density_scale = density_scale;
  if (name == "z") {
    f.kind = Kind::identity;
  } else if (name == "z^2") {
    f.kind = Kind::square;
  } else if (name == "z^3") {
    f.kind = Kind::cube;
  } else if (name == "i*exp(-pi*z)") {
    f.kind = Kind::i_exp_neg_pi;
  } else {
    throw std::invalid_argument("unknown holomorphic function '" + name + "'");
  }
  return f;
}

HolomorphicExample generate_holomorphic_example(const HolomorphicFunction& f,
                                                double q, const Grid& grid) {
  if (!(q > 0.0)) {
    throw std::invalid_argument("holomorphic example: q must be positive");
  }
  if (grid.dim() != 2) {
    throw std::invalid_argument("holomorphic example: grid must be 2D");
  }
  HolomorphicExample ex{f, q, Field(grid), CellField(grid), CellField(grid),
                        CellVectorField(grid)};
  for (std::size_t k = 0; k < ex.u.size(); ++k) {
    const Point x = grid.node_point(k);
    ex.u[k] = f.value({x[0], x[1]}).real();
  }
  for (std::size_t c = 0; c < grid.cell_count(); ++c) {
    const Point x = grid.cell_center(c);
    const std::complex<double> z{x[0], x[1]};
    const double m = f.density_scale * std::max(0.0, f.value(z).imag());
    const std::complex<double> d = f.derivative(z);
    // f' = u_x - i u_y.
    const Vec grad{d.real(), -d.imag()};
    ex.m_tilde[c] = m;
    ex.grad_u[c] = grad;
    ex.V[c] = std::pow(m, 1.0 / q) -
              0.5 * (grad[0] * grad[0] + grad[1] * grad[1]);
  }
  return ex;
}

}  // namespace mfg
