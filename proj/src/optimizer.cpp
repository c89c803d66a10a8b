#include "mfg/optimizer.hpp"

#include <algorithm>
#include <limits>

#include <Eigen/SparseCholesky>
#include <Eigen/SparseCore>

namespace mfg {

std::string to_string(InitMode m) {
  switch (m) {
    case InitMode::psi: return "psi";
    case InitMode::zeros: return "zeros";
    case InitMode::given: return "given";
  }
  return "unknown";
}

InitMode init_mode_from_string(const std::string& name) {
  for (auto m : {InitMode::psi, InitMode::zeros, InitMode::given}) {
    if (to_string(m) == name) return m;
  }
  throw std::invalid_argument("unknown initialization mode '" + name + "'");
}

std::string to_string(Termination t) {
  switch (t) {
    case Termination::converged: return "converged";
    case Termination::objective_stall: return "objective_stall";
    case Termination::gradient_plateau: return "gradient_plateau";
    case Termination::line_search_stall: return "line_search_stall";
    case Termination::max_iterations: return "max_iterations";
  }
  return "unknown";
}

void SolveOptions::validate() const {
  auto positive = [](double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw std::invalid_argument(std::string("solve options: ") + name +
                                  " must be positive");
    }
  };
  if (max_iters < 1) {
    throw std::invalid_argument("solve options: max_iters must be >= 1");
  }
  positive(tol_pg, "tol_pg");
  positive(tol_f, "tol_f");
  positive(initial_step, "initial_step");
  positive(min_step, "min_step");
  positive(bb_min, "bb_min");
  positive(bb_max, "bb_max");
  positive(binding_tolerance, "binding_tolerance");
  if (!(armijo_c > 0.0 && armijo_c < 1.0)) {
    throw std::invalid_argument("solve options: armijo_c must be in (0, 1)");
  }
  if (!(shrink > 0.0 && shrink < 1.0)) {
    throw std::invalid_argument("solve options: shrink must be in (0, 1)");
  }
  if (stall_window < 1 || plateau_window < 1) {
    throw std::invalid_argument("solve options: windows must be >= 1");
  }
}

void project_in_place(std::span<double> w, std::span<const double> psi,
                      const BoundaryClass& boundary) {
  for (std::size_t k : boundary.boundary_nodes) {
    if (boundary.label[k] == BoundaryClass::Label::dirichlet) {
      w[k] = std::min(w[k], psi[k]);
    }
  }
}

Field project(const Field& w, const Field& psi, const BoundaryClass& boundary) {
  if (!(w.grid == psi.grid)) {
    throw std::invalid_argument("project: fields on different grids");
  }
  Field out = w;
  project_in_place(out.values, psi.values, boundary);
  return out;
}

double projected_gradient_norm(std::span<const double> w,
                               std::span<const double> grad,
                               std::span<const double> scale,
                               std::span<const double> psi,
                               const BoundaryClass& boundary) {
  double norm = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    double next = w[i] - grad[i] / scale[i];
    if (boundary.label[i] == BoundaryClass::Label::dirichlet) {
      next = std::min(next, psi[i]);
    }
    norm = std::max(norm, std::abs(w[i] - next));
  }
  return norm;
}

LineSearchResult line_search(const Objective& obj, std::span<const double> w,
                             std::span<const double> direction, double step0,
                             const LineSearchOptions& opts) {
  std::vector<double> grad(w.size());
  obj.gradient(w, grad);
  auto change = [&](std::span<const double> s) {
    return obj.evaluate_change(w, s);
  };
  auto proj = [&](std::span<double> v) {
    project_in_place(v, obj.exit_cost().values, obj.boundary());
  };
  return projected_armijo(change, proj, w, grad, direction, step0, opts);
}

namespace {

// Variable metric for the free nodes: stiffness matrix of the cell gradient
// plus the lumped node scale as a shift, so it is definite even on the
// constant and checkerboard modes. Binding nodes keep the diagonal scale.
class StiffnessMetric {
 public:
  StiffnessMetric(const Grid& grid, const std::vector<double>& scale)
      : scale_(scale), n_(grid.node_count()) {
    const double vol = grid.cell_volume();
    std::vector<std::pair<std::size_t, Vec>> row;
    for (std::size_t c = 0; c < grid.cell_count(); ++c) {
      const auto nodes = grid.cell_nodes(c);
      row.clear();
      if (grid.dim() == 1) {
        const double a = 1.0 / grid.spacing(0);
        row.push_back({nodes[0], {-a, 0.0}});
        row.push_back({nodes[1], {a, 0.0}});
      } else {
        const double ax = 0.5 / grid.spacing(0);
        const double ay = 0.5 / grid.spacing(1);
        row.push_back({nodes[0], {-ax, -ay}});
        row.push_back({nodes[1], {ax, -ay}});
        row.push_back({nodes[2], {-ax, ay}});
        row.push_back({nodes[3], {ax, ay}});
      }
      for (const auto& [i, bi] : row) {
        for (const auto& [j, bj] : row) {
          triplets_.emplace_back(static_cast<int>(i), static_cast<int>(j),
                                 vol * (bi[0] * bj[0] + bi[1] * bj[1]));
        }
      }
    }
    for (std::size_t i = 0; i < n_; ++i) {
      triplets_.emplace_back(static_cast<int>(i), static_cast<int>(i),
                             scale_[i]);
    }
    full_.resize(static_cast<int>(n_), static_cast<int>(n_));
    full_.setFromTriplets(triplets_.begin(), triplets_.end());
  }

  /// d = -K_FF^{-1} g_F on free nodes, -g_i / s_i on binding nodes.
  void direction(std::span<const double> g, const std::vector<char>& binding,
                 std::span<double> d) {
    if (!ready_ || binding != binding_) factor(binding);
    Eigen::VectorXd rhs(static_cast<int>(free_count_));
    for (std::size_t i = 0; i < n_; ++i) {
      if (binding[i]) {
        d[i] = -g[i] / scale_[i];
      } else {
        rhs[index_[i]] = -g[i];
      }
    }
    const Eigen::VectorXd x = solver_.solve(rhs);
    for (std::size_t i = 0; i < n_; ++i) {
      if (!binding[i]) d[i] = x[index_[i]];
    }
  }

  /// s^T K s over all nodes.
  double quadratic(std::span<const double> s) const {
    const Eigen::Map<const Eigen::VectorXd> v(s.data(),
                                              static_cast<int>(s.size()));
    return v.dot(full_ * v);
  }

 private:
  void factor(const std::vector<char>& binding) {
    binding_ = binding;
    index_.assign(n_, -1);
    free_count_ = 0;
    for (std::size_t i = 0; i < n_; ++i) {
      if (!binding[i]) index_[i] = static_cast<int>(free_count_++);
    }
    std::vector<Eigen::Triplet<double>> sub;
    sub.reserve(triplets_.size());
    for (const auto& t : triplets_) {
      const int r = index_[static_cast<std::size_t>(t.row())];
      const int c = index_[static_cast<std::size_t>(t.col())];
      if (r >= 0 && c >= 0) sub.emplace_back(r, c, t.value());
    }
    Eigen::SparseMatrix<double> k(static_cast<int>(free_count_),
                                  static_cast<int>(free_count_));
    k.setFromTriplets(sub.begin(), sub.end());
    solver_.compute(k);
    if (solver_.info() != Eigen::Success) {
      throw std::runtime_error("solve: metric factorization failed");
    }
    ready_ = true;
  }

  std::vector<double> scale_;
  std::size_t n_;
  std::vector<Eigen::Triplet<double>> triplets_;
  Eigen::SparseMatrix<double> full_;
  std::vector<char> binding_;
  std::vector<int> index_;
  std::size_t free_count_ = 0;
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> solver_;
  bool ready_ = false;
};

}  // namespace

SolveResult solve(const Objective& obj, const SolveOptions& opts) {
  opts.validate();
  const Grid& grid = obj.grid();
  const BoundaryClass& bc = obj.boundary();
  const std::vector<double>& psi = obj.exit_cost().values;
  const std::size_t n = grid.node_count();

  std::vector<double> w;
  switch (opts.init) {
    case InitMode::psi: w = psi; break;
    case InitMode::zeros: w.assign(n, 0.0); break;
    case InitMode::given:
      if (opts.initial.size() != n) {
        throw std::invalid_argument(
            "solve: initial values do not match the node count");
      }
      w = opts.initial;
      break;
  }
  project_in_place(w, psi, bc);

  const std::vector<double> scale = obj.node_scale();
  const LineSearchOptions ls_opts{opts.armijo_c, opts.shrink, opts.min_step};

  SolveReport report;
  int iteration = 0;
  auto evaluate_checked = [&](std::span<const double> v) {
    const double f = obj.evaluate(v);
    if (!std::isfinite(f)) {
      throw SolveError("solve: objective is not finite", iteration,
                       std::vector<double>(v.begin(), v.end()));
    }
    return f;
  };

  double f = evaluate_checked(w);
  ++report.evaluations;
  std::vector<double> g(n);
  obj.gradient(w, g);
  double pg = projected_gradient_norm(w, g, scale, psi, bc);
  report.history.push_back(f);

  double best_pg = pg;
  int best_iter = 0;
  double alpha = opts.initial_step;
  std::vector<double> d(n);
  std::vector<double> g_next(n);
  std::vector<double> step(n);
  std::vector<char> binding(n, 0);
  StiffnessMetric metric(grid, scale);
  report.reason = Termination::max_iterations;

  auto proj = [&](std::span<double> v) { project_in_place(v, psi, bc); };

  while (true) {
    if (pg <= opts.tol_pg) {
      report.reason = Termination::converged;
      break;
    }
    if (iteration >= opts.max_iters) {
      report.reason = Termination::max_iterations;
      break;
    }
    ++iteration;
    const double eps = std::min(opts.binding_tolerance, pg);
    for (std::size_t k : bc.boundary_nodes) {
      binding[k] = bc.label[k] == BoundaryClass::Label::dirichlet &&
                   w[k] >= psi[k] - eps && g[k] < 0.0;
    }
    metric.direction(g, binding, d);
    auto change = [&](std::span<const double> s) {
      const double delta = obj.evaluate_change(w, s);
      if (!std::isfinite(delta)) {
        std::vector<double> dump(n);
        for (std::size_t i = 0; i < n; ++i) dump[i] = w[i] + s[i];
        throw SolveError("solve: objective is not finite during line search",
                         iteration, std::move(dump));
      }
      return delta;
    };
    LineSearchResult ls = projected_armijo(change, proj, w, g, d, alpha, ls_opts);
    report.evaluations += ls.evaluations;
    if (ls.stalled) {
      --iteration;
      report.reason = Termination::line_search_stall;
      break;
    }

    for (std::size_t i = 0; i < n; ++i) step[i] = ls.iterate[i] - w[i];
    const double sMs = metric.quadratic(step);
    obj.gradient(ls.iterate, g_next);
    double sy = 0.0;
    for (std::size_t i = 0; i < n; ++i) sy += step[i] * (g_next[i] - g[i]);
    w.swap(ls.iterate);
    g.swap(g_next);
    f += ls.change;
    report.history.push_back(f);

    alpha = sy > 0.0 ? std::clamp(sMs / sy, opts.bb_min, opts.bb_max)
                     : std::min(opts.bb_max, 10.0 * ls.step);

    pg = projected_gradient_norm(w, g, scale, psi, bc);
    if (pg < best_pg) {
      best_pg = pg;
      best_iter = iteration;
    }
    if (pg <= opts.tol_pg) continue;
    if (iteration - best_iter >= opts.plateau_window) {
      report.reason = Termination::gradient_plateau;
      break;
    }
    if (iteration >= opts.stall_window &&
        iteration - best_iter >= opts.stall_window) {
      const double past =
          report.history[static_cast<std::size_t>(iteration - opts.stall_window)];
      if (past - f <= opts.tol_f * std::max(1.0, std::abs(f))) {
        report.reason = Termination::objective_stall;
        break;
      }
    }
  }

  Field u(grid, std::move(w));
  report.iterations = iteration;
  report.objective = evaluate_checked(u.values);
  report.pg_norm = pg;
  report.converged = report.reason == Termination::converged;
  for (std::size_t k : bc.boundary_nodes) {
    if (bc.label[k] == BoundaryClass::Label::dirichlet && u[k] == psi[k]) {
      report.active_set.push_back(k);
    }
  }
  DensityFields density = obj.recover_density(u);
  return SolveResult{std::move(u), std::move(density), std::move(report)};
}

}  // namespace mfg
