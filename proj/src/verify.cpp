#include "mfg/verify.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mfg {

namespace {

void require_same_grid(const ProblemSpec& problem, const Grid& a,
                       const Grid& b) {
  if (!(a == b)) {
    throw std::invalid_argument("verify: fields live on different grids");
  }
  if (a.dim() != problem.domain.dim) {
    throw std::invalid_argument(
        "verify: grid dimension does not match the problem");
  }
}

struct CellState {
  std::vector<Vec> du;
  std::vector<LocalCoefficients> coeff;
  std::vector<Vec> flux;  // m D_pH(x_c, Du_c)
};

CellState cell_state(const ProblemSpec& problem, const CellField& m,
                     const Field& u) {
  const Grid& grid = u.grid;
  const std::size_t cells = grid.cell_count();
  CellState s{std::vector<Vec>(cells), {}, std::vector<Vec>(cells)};
  cell_gradient(grid, u.values, s.du);
  s.coeff.reserve(cells);
  for (std::size_t c = 0; c < cells; ++c) {
    s.coeff.push_back(
        local_coefficients(problem.hamiltonian, grid.cell_center(c)));
    const Vec dp = hamiltonian_gradient(problem.hamiltonian, s.coeff[c], s.du[c]);
    s.flux[c] = {m[c] * dp[0], m[c] * dp[1]};
  }
  return s;
}

double norm(Vec v) { return std::hypot(v[0], v[1]); }

}  // namespace

double default_eps_m(const CellField& m) {
  double top = 1.0;
  for (double v : m.values) top = std::max(top, v);
  return 1e-6 * top;
}

std::vector<DiagnosticsReport::Check> DiagnosticsReport::checks() const {
  auto make = [](const char* name, double v, double t) {
    return Check{name, v, t, v <= t};
  };
  const Thresholds& t = thresholds;
  return {
      make("hj_residual_pos", hj_residual_pos, t.hj_residual_pos),
      make("hj_inequality_violation", hj_inequality_violation, t.hj_inequality),
      make("continuity_residual", continuity_residual, t.continuity),
      make("neumann_error", neumann_error, t.neumann),
      make("dirichlet_sign_violation", dirichlet_sign_violation,
           t.dirichlet_sign),
      make("complementarity_residual", complementarity_residual,
           t.complementarity),
      make("mass_balance_gap", mass_balance_gap, t.mass_balance),
  };
}

bool DiagnosticsReport::passed() const {
  for (const auto& c : checks()) {
    if (!c.passed) return false;
  }
  return true;
}

double apriori_energy(const ProblemSpec& problem, const CellField& m,
                      const Field& u) {
  require_same_grid(problem, m.grid, u.grid);
  const CellVectorField du = cell_gradient(u);
  const double beta = problem.hamiltonian.growth();
  std::vector<double> terms(m.size());
  for (std::size_t c = 0; c < m.size(); ++c) {
    const double gm = coupling_g(problem.coupling, m[c]);
    terms[c] = m[c] * gm + (m[c] + 1.0) * std::pow(norm(du[c]), beta);
  }
  return compensated_sum(terms) * m.grid.cell_volume();
}

DiagnosticsReport check_weak_solution(const ProblemSpec& problem,
                                      const CellField& m, const Field& u,
                                      std::optional<double> eps_m,
                                      const Thresholds& thresholds) {
  require_same_grid(problem, m.grid, u.grid);
  const Grid& grid = u.grid;
  DiagnosticsReport r;
  r.thresholds = thresholds;
  r.eps_m = eps_m.value_or(default_eps_m(m));
  if (!(r.eps_m > 0.0)) {
    throw std::invalid_argument("verify: eps_m must be positive");
  }
  const CellState s = cell_state(problem, m, u);
  const std::size_t cells = grid.cell_count();

  const double alpha = problem.coupling.alpha;
  const double gamma = problem.gamma();
  const double alpha_conj = alpha / (alpha - 1.0);
  const double gamma_conj = gamma / (gamma - 1.0);
  const double beta = problem.hamiltonian.growth();
  std::vector<double> energy(cells), m_conj(cells), g_pow(cells),
      f_conj(cells);
  for (std::size_t c = 0; c < cells; ++c) {
    const double h = hamiltonian_value(problem.hamiltonian, s.coeff[c], s.du[c]);
    const double gm = coupling_g(problem.coupling, m[c]);
    const double gap = h - gm;
    if (m[c] > r.eps_m) {
      r.hj_residual_pos = std::max(r.hj_residual_pos, std::abs(gap));
    }
    r.hj_inequality_violation = std::max(r.hj_inequality_violation, gap);
    energy[c] = m[c] * gm + (m[c] + 1.0) * std::pow(norm(s.du[c]), beta);
    m_conj[c] = std::pow(std::max(0.0, m[c]), alpha_conj);
    g_pow[c] = std::pow(std::abs(gm), alpha);
    f_conj[c] = std::pow(norm(s.flux[c]), gamma_conj);
  }
  const double vol = grid.cell_volume();
  r.apriori_energy = compensated_sum(energy) * vol;
  r.integral_m_conjugate = compensated_sum(m_conj) * vol;
  r.integral_g_power = compensated_sum(g_pow) * vol;
  r.integral_flux_conjugate = compensated_sum(f_conj) * vol;

  std::vector<double> pairing(grid.node_count());
  flux_pairing(grid, s.flux, pairing);
  const BoundaryClass bc = classify_boundary(grid, problem.boundary);
  const Field dual = dual_volume(grid);
  const Field psi = sample_nodes(grid, problem.boundary.exit_cost);

  std::vector<double> jw(grid.node_count(), 0.0);
  for (std::size_t k : bc.boundary_nodes) {
    if (bc.neumann_weight[k] > 0.0) {
      jw[k] = problem.boundary.influx(grid.node_point(k)) * bc.neumann_weight[k];
    }
  }
  std::vector<double> balance;
  for (std::size_t k = 0; k < grid.node_count(); ++k) {
    switch (bc.label[k]) {
      case BoundaryClass::Label::interior:
        r.continuity_residual =
            std::max(r.continuity_residual, std::abs(pairing[k]) / dual[k]);
        balance.push_back(pairing[k]);
        break;
      case BoundaryClass::Label::neumann:
        r.neumann_error = std::max(
            r.neumann_error, std::abs(pairing[k] - jw[k]) / bc.neumann_weight[k]);
        balance.push_back(pairing[k] - jw[k]);
        break;
      case BoundaryClass::Label::dirichlet: {
        const double normal_flux = (pairing[k] - jw[k]) / bc.dirichlet_weight[k];
        r.dirichlet_sign_violation =
            std::max(r.dirichlet_sign_violation, normal_flux);
        r.complementarity_residual =
            std::max(r.complementarity_residual,
                     std::abs((psi[k] - u[k]) * normal_flux));
        break;
      }
    }
  }
  r.mass_balance_gap = std::abs(compensated_sum(balance));
  if (grid.dim() == 2) {
    r.free_boundary_flux = free_boundary_flux(problem, m, u, r.eps_m).max_flux;
  }
  return r;
}

MonotonicityResult monotonicity_gap(const ProblemSpec& problem,
                                    const CellField& m, const Field& u,
                                    const CellField& eta, const Field& xi) {
  require_same_grid(problem, m.grid, u.grid);
  require_same_grid(problem, eta.grid, xi.grid);
  require_same_grid(problem, m.grid, eta.grid);
  const Grid& grid = u.grid;
  const CellState a = cell_state(problem, m, u);
  const CellState b = cell_state(problem, eta, xi);
  const auto& hs = problem.hamiltonian;
  const std::size_t cells = grid.cell_count();
  std::vector<double> t2(cells), t3(cells);
  for (std::size_t c = 0; c < cells; ++c) {
    const Vec p = a.du[c];
    const Vec q = b.du[c];
    // H(q) - H(p) as a difference so that it vanishes exactly at p == q.
    const double hq_minus_hp =
        hamiltonian_change(hs, a.coeff[c], p, {q[0] - p[0], q[1] - p[1]});
    const Vec dpq{p[0] - q[0], p[1] - q[1]};
    t2[c] = (m[c] - eta[c]) * hq_minus_hp +
            dpq[0] * (a.flux[c][0] - b.flux[c][0]) +
            dpq[1] * (a.flux[c][1] - b.flux[c][1]);
    t3[c] = (coupling_g(problem.coupling, m[c]) -
             coupling_g(problem.coupling, eta[c])) *
            (m[c] - eta[c]);
  }
  MonotonicityResult r;
  r.I2 = compensated_sum(t2) * grid.cell_volume();
  r.I3 = compensated_sum(t3) * grid.cell_volume();

  std::vector<double> ra(grid.node_count()), rb(grid.node_count());
  flux_pairing(grid, a.flux, ra);
  flux_pairing(grid, b.flux, rb);
  std::vector<double> t1;
  for (std::size_t k = 0; k < grid.node_count(); ++k) {
    if (!grid.is_boundary_node(k)) continue;
    t1.push_back((u[k] - xi[k]) * (rb[k] - ra[k]));
  }
  r.I1 = compensated_sum(t1);
  r.total = r.I1 + r.I2 + r.I3;
  return r;
}

std::string to_string(UniquenessFindings::Status s) {
  switch (s) {
    case UniquenessFindings::Status::consistent: return "consistent";
    case UniquenessFindings::Status::violation: return "violation";
    case UniquenessFindings::Status::inconclusive: return "inconclusive";
  }
  return "unknown";
}

UniquenessFindings uniqueness_check(const ProblemSpec& problem,
                                    const CellField& m, const Field& u,
                                    const CellField& eta, const Field& xi,
                                    std::optional<double> eps_m,
                                    const UniquenessOptions& opts) {
  require_same_grid(problem, m.grid, u.grid);
  require_same_grid(problem, eta.grid, xi.grid);
  require_same_grid(problem, m.grid, eta.grid);
  UniquenessFindings f;
  const double eps = eps_m.value_or(
      std::max(default_eps_m(m), default_eps_m(eta)));
  if (opts.require_solutions) {
    const auto r1 = check_weak_solution(problem, m, u, eps, opts.thresholds);
    const auto r2 = check_weak_solution(problem, eta, xi, eps, opts.thresholds);
    if (!r1.passed() || !r2.passed()) {
      f.status = UniquenessFindings::Status::inconclusive;
      f.messages.push_back(
          "a pair does not pass the weak-solution check; nothing to conclude");
      return f;
    }
  }
  const CellVectorField du = cell_gradient(u);
  const CellVectorField dxi = cell_gradient(xi);
  for (std::size_t c = 0; c < m.size(); ++c) {
    f.m_gap = std::max(f.m_gap, std::abs(m[c] - eta[c]));
    if (std::min(m[c], eta[c]) > eps) {
      ++f.positive_cells;
      f.du_gap = std::max(
          f.du_gap, norm({du[c][0] - dxi[c][0], du[c][1] - dxi[c][1]}));
    }
  }
  if (f.m_gap > opts.m_tol) {
    f.status = UniquenessFindings::Status::violation;
    f.messages.push_back("densities differ by " + std::to_string(f.m_gap));
  }
  if (f.du_gap > opts.du_tol) {
    f.status = UniquenessFindings::Status::violation;
    f.messages.push_back("gradients differ on {m > 0} by " +
                         std::to_string(f.du_gap));
  }
  return f;
}

FreeBoundaryResult free_boundary_flux(const ProblemSpec& problem,
                                      const CellField& m, const Field& u,
                                      std::optional<double> eps_m) {
  require_same_grid(problem, m.grid, u.grid);
  const Grid& grid = u.grid;
  if (grid.dim() != 2) {
    throw std::invalid_argument("free_boundary_flux: needs a 2D grid");
  }
  const double eps = eps_m.value_or(default_eps_m(m));
  const CellState s = cell_state(problem, m, u);
  FreeBoundaryResult r;
  auto visit = [&](std::size_t a, std::size_t b, Vec normal_ab) {
    const bool pa = m[a] > eps;
    const bool pb = m[b] > eps;
    if (pa == pb) return;
    const std::size_t pos = pa ? a : b;
    const std::size_t empty = pa ? b : a;
    const Vec nu = pa ? normal_ab : Vec{-normal_ab[0], -normal_ab[1]};
    r.interfaces.push_back({pos, empty, nu});
    const double f = std::abs(s.flux[pos][0] * nu[0] + s.flux[pos][1] * nu[1]);
    r.max_flux = std::max(r.max_flux, f);
  };
  const int cx = grid.cells(0);
  const int cy = grid.cells(1);
  for (int j = 0; j < cy; ++j) {
    for (int i = 0; i < cx; ++i) {
      const std::size_t c = grid.cell_index(i, j);
      if (i + 1 < cx) visit(c, grid.cell_index(i + 1, j), {1.0, 0.0});
      if (j + 1 < cy) visit(c, grid.cell_index(i, j + 1), {0.0, 1.0});
    }
  }
  return r;
}

}  // namespace mfg
