#include "mfg/functional.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace mfg {

Objective::Objective(ProblemSpec problem, Grid grid)
    : problem_(std::move(problem)),
      grid_(std::move(grid)),
      boundary_(classify_boundary(grid_, problem_.boundary)),
      psi_(sample_nodes(grid_, problem_.boundary.exit_cost)),
      j_(grid_),
      jw_(grid_.node_count(), 0.0) {
  if (grid_.dim() != problem_.domain.dim) {
    throw std::invalid_argument("objective: grid and domain dimensions differ");
  }
  for (std::size_t k : boundary_.boundary_nodes) {
    if (boundary_.neumann_weight[k] == 0.0) continue;
    const double j = problem_.boundary.influx(grid_.node_point(k));
    if (!std::isfinite(j) || j < 0.0) {
      throw std::invalid_argument("objective: j must be finite and >= 0 on "
                                  "Gamma_N");
    }
    j_[k] = j;
    jw_[k] = j * boundary_.neumann_weight[k];
  }
  coeff_.reserve(grid_.cell_count());
  for (std::size_t c = 0; c < grid_.cell_count(); ++c) {
    coeff_.push_back(
        local_coefficients(problem_.hamiltonian, grid_.cell_center(c)));
  }
}

std::vector<double> Objective::node_scale() const {
  const Field vol = dual_volume(grid_);
  std::vector<double> s(grid_.node_count());
  for (std::size_t k = 0; k < s.size(); ++k) {
    s[k] = boundary_.label[k] == BoundaryClass::Label::interior
               ? vol[k]
               : boundary_.weight[k];
  }
  return s;
}

void Objective::check(std::span<const double> w) const {
  if (w.size() != grid_.node_count()) {
    throw std::invalid_argument("objective: field size does not match grid");
  }
  for (double x : w) {
    if (!std::isfinite(x)) {
      throw EvaluationError("objective: non-finite nodal value");
    }
  }
}

double Objective::evaluate(const Field& w) const {
  if (!(w.grid == grid_)) {
    throw std::invalid_argument("objective: field is on a different grid");
  }
  return evaluate(std::span<const double>(w.values));
}

double Objective::evaluate(std::span<const double> w) const {
  check(w);
  const std::size_t cells = grid_.cell_count();
  std::vector<Vec> dw(cells);
  cell_gradient(grid_, w, dw);
  std::vector<double> terms(cells);
  for (std::size_t c = 0; c < cells; ++c) {
    const double h = hamiltonian_value(problem_.hamiltonian, coeff_[c], dw[c]);
    terms[c] = coupling_G(problem_.coupling, h);
  }
  const double interior = compensated_sum(terms) * grid_.cell_volume();
  std::vector<double> bterms;
  for (std::size_t k : boundary_.boundary_nodes) {
    if (jw_[k] != 0.0) bterms.push_back(jw_[k] * w[k]);
  }
  return interior - compensated_sum(bterms);
}

Field Objective::gradient(const Field& w) const {
  if (!(w.grid == grid_)) {
    throw std::invalid_argument("objective: field is on a different grid");
  }
  Field out(grid_);
  gradient(w.values, out.values);
  return out;
}

void Objective::gradient(std::span<const double> w,
                         std::span<double> out) const {
  check(w);
  const std::size_t cells = grid_.cell_count();
  std::vector<Vec> flux(cells);
  cell_gradient(grid_, w, flux);
  for (std::size_t c = 0; c < cells; ++c) {
    const Vec p = flux[c];
    const double h = hamiltonian_value(problem_.hamiltonian, coeff_[c], p);
    const double gp = coupling_Gprime(problem_.coupling, h);
    const Vec dp = hamiltonian_gradient(problem_.hamiltonian, coeff_[c], p);
    flux[c] = {gp * dp[0], gp * dp[1]};
  }
  flux_pairing(grid_, flux, out);
  for (std::size_t k : boundary_.boundary_nodes) out[k] -= jw_[k];
}

double Objective::evaluate_change(std::span<const double> w,
                                  std::span<const double> step) const {
  check(w);
  check(step);
  const std::size_t cells = grid_.cell_count();
  std::vector<Vec> dw(cells);
  std::vector<Vec> ds(cells);
  cell_gradient(grid_, w, dw);
  cell_gradient(grid_, step, ds);
  std::vector<double> terms(cells);
  for (std::size_t c = 0; c < cells; ++c) {
    const auto& hs = problem_.hamiltonian;
    const double h = hamiltonian_value(hs, coeff_[c], dw[c]);
    const double dh = hamiltonian_change(hs, coeff_[c], dw[c], ds[c]);
    terms[c] = coupling_change(problem_.coupling, h, dh);
  }
  const double interior = compensated_sum(terms) * grid_.cell_volume();
  std::vector<double> bterms;
  for (std::size_t k : boundary_.boundary_nodes) {
    if (jw_[k] != 0.0) bterms.push_back(jw_[k] * step[k]);
  }
  return interior - compensated_sum(bterms);
}

DensityFields Objective::recover_density(const Field& u) const {
  if (!(u.grid == grid_)) {
    throw std::invalid_argument("objective: field is on a different grid");
  }
  const std::size_t cells = grid_.cell_count();
  const CellVectorField du = cell_gradient(u);
  std::vector<double> m(cells);
  std::vector<Vec> flux(cells);
  for (std::size_t c = 0; c < cells; ++c) {
    const double h =
        hamiltonian_value(problem_.hamiltonian, coeff_[c], du[c]);
    m[c] = coupling_Gprime(problem_.coupling, h);
    const Vec dp = hamiltonian_gradient(problem_.hamiltonian, coeff_[c], du[c]);
    flux[c] = {m[c] * dp[0], m[c] * dp[1]};
  }
  Field nodal(grid_);
  std::vector<int> count(grid_.node_count(), 0);
  const int per_cell = grid_.dim() == 1 ? 2 : 4;
  for (std::size_t c = 0; c < cells; ++c) {
    const auto n = grid_.cell_nodes(c);
    for (int k = 0; k < per_cell; ++k) {
      nodal[n[k]] += m[c];
      ++count[n[k]];
    }
  }
  for (std::size_t k = 0; k < nodal.size(); ++k) nodal[k] /= count[k];
  return DensityFields{CellField(grid_, std::move(m)),
                       CellVectorField(grid_, std::move(flux)),
                       std::move(nodal)};
}

Field random_smooth_field(const Grid& grid, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
  struct Mode {
    double amp, kx, ky, phase;
  };
  std::vector<Mode> modes;
  for (int k = 1; k <= 3; ++k) {
    modes.push_back({unit(rng), k * std::numbers::pi,
                     grid.dim() == 2 ? unit(rng) * k * std::numbers::pi : 0.0,
                     angle(rng)});
  }
  const double offset = unit(rng);
  Field w(grid);
  for (std::size_t i = 0; i < w.size(); ++i) {
    const Point x = grid.node_point(i);
    const double sx = (x[0] - grid.lo()[0]) / (grid.hi()[0] - grid.lo()[0]);
    const double sy = grid.dim() == 2
                          ? (x[1] - grid.lo()[1]) / (grid.hi()[1] - grid.lo()[1])
                          : 0.0;
    double v = offset + 0.05 * unit(rng);
    for (const auto& m : modes) v += m.amp * std::sin(m.kx * sx + m.ky * sy + m.phase);
    w[i] = v;
  }
  return w;
}

GradientAudit gradient_audit(const Objective& obj, int fields,
                             std::uint64_t seed, double step) {
  std::mt19937_64 rng(seed);
  GradientAudit audit;
  for (int f = 0; f < fields; ++f) {
    Field w = random_smooth_field(obj.grid(), rng);
    const Field g = obj.gradient(w);
    double diff = 0.0;
    double scale = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) {
      const double keep = w[i];
      w[i] = keep + step;
      const double up = obj.evaluate(w);
      w[i] = keep - step;
      const double down = obj.evaluate(w);
      w[i] = keep;
      const double fd = (up - down) / (2.0 * step);
      diff = std::max(diff, std::abs(fd - g[i]));
      scale = std::max({scale, std::abs(fd), std::abs(g[i])});
    }
    const double rel = scale > 0.0 ? diff / scale : 0.0;
    audit.per_field.push_back(rel);
    audit.max_relative_error = std::max(audit.max_relative_error, rel);
  }
  return audit;
}

}  // namespace mfg
