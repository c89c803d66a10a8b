#include "mfg/cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <filesystem>
#include <iostream>
#include <sstream>

#include "mfg/analytic.hpp"
#include "mfg/functional.hpp"
#include "mfg/io.hpp"
#include "mfg/optimizer.hpp"
#include "mfg/verify.hpp"

namespace mfg {

namespace fs = std::filesystem;

RunConfig apply_flags(RunConfig config, const CliFlags& flags) {
  if (flags.out) config.output_dir = *flags.out;
  if (flags.n) {
    config.cells = *flags.n;
    if (config.problem.domain.dim == 1) config.cells[1] = 1;
  }
  if (flags.seed) config.seed = *flags.seed;
  return config;
}

Grid grid_for(const RunConfig& config) {
  return build_grid(config.problem.domain, config.cells);
}

std::array<int, 2> parse_resolution(const std::string& text) {
  std::array<int, 2> n{0, 0};
  std::stringstream ss(text);
  std::string part;
  int k = 0;
  while (std::getline(ss, part, ',')) {
    if (k == 2) throw std::invalid_argument("--n takes N or NX,NY");
    std::size_t used = 0;
    n[static_cast<std::size_t>(k++)] = std::stoi(part, &used);
    if (used != part.size()) throw std::invalid_argument("--n: not an integer");
  }
  if (k == 0) throw std::invalid_argument("--n: empty");
  if (k == 1) n[1] = n[0];
  return n;
}

namespace {

fs::path prepare_output(const RunConfig& config) {
  fs::path dir(config.output_dir);
  fs::create_directories(dir);
  return dir;
}

struct OracleFields {
  Field u;
  CellField m;
  std::string family;
};

bool is_1d_reference(const ProblemSpec& p) {
  return p.domain.dim == 1 &&
         p.coupling == CouplingSpec::quadratic_positive_part() &&
         p.hamiltonian.variant == HamiltonianSpec::Variant::quadratic &&
         p.boundary.kind(Face::left) == BoundaryKind::neumann &&
         p.boundary.kind(Face::right) == BoundaryKind::dirichlet &&
         p.boundary.influx.is_constant();
}

// Oracle fields for the configured family. With `strict_match` the family
// must describe the configured problem exactly (used by compare).
std::optional<OracleFields> build_oracle(const RunConfig& config,
                                         const Grid& grid, bool strict_match,
                                         std::string& why) {
  if (!config.oracle) {
    why = "no oracle selected in the config";
    return std::nullopt;
  }
  const OracleSelection& sel = *config.oracle;
  const ProblemSpec& p = config.problem;
  if (sel.family == "zero_flux" || sel.family == "positive_flux") {
    if (p.domain.dim != 1) {
      why = "oracle family '" + sel.family + "' needs a 1D problem";
      return std::nullopt;
    }
    const double j0 = p.boundary.influx(p.domain.lo);
    const bool zero = sel.family == "zero_flux";
    if (strict_match && (!is_1d_reference(p) || (zero ? j0 != 0.0 : !(j0 > 0.0)))) {
      why = "problem does not match oracle family '" + sel.family + "'";
      return std::nullopt;
    }
    if (!zero && !(j0 > 0.0)) {
      why = "positive_flux oracle needs a constant influx j0 > 0";
      return std::nullopt;
    }
    const Oracle1D o =
        zero ? Oracle1D::zero_flux(p.hamiltonian.potential)
             : Oracle1D::positive_flux(p.hamiltonian.potential, j0,
                                       p.boundary.exit_cost(p.domain.hi));
    return OracleFields{o.u(grid, sel.branch), o.m_cells(grid), sel.family};
  }
  if (sel.family == "exponential") {
    if (strict_match && !(p == exponential_problem())) {
      why = "problem does not match oracle family 'exponential'";
      return std::nullopt;
    }
    try {
      ExponentialOracle o = oracle_2d_exponential(grid);
      return OracleFields{std::move(o.u), std::move(o.m), sel.family};
    } catch (const std::invalid_argument& e) {
      why = e.what();
      return std::nullopt;
    }
  }
  if (sel.family == "holomorphic") {
    if (strict_match) {
      why = "holomorphic examples have no boundary-value problem to compare";
      return std::nullopt;
    }
    try {
      HolomorphicFunction f;
      if (sel.function == "polynomial") {
        f.kind = HolomorphicFunction::Kind::polynomial;
        for (double c : sel.polynomial) f.coeffs.emplace_back(c, 0.0);
        f.density_scale = sel.density_scale;
      } else {
        f = HolomorphicFunction::named(sel.function, sel.density_scale);
      }
      HolomorphicExample ex = generate_holomorphic_example(f, sel.q, grid);
      return OracleFields{std::move(ex.u), std::move(ex.m_tilde), sel.family};
    } catch (const std::invalid_argument& e) {
      why = e.what();
      return std::nullopt;
    }
  }
  why = "unknown oracle family '" + sel.family + "'";
  return std::nullopt;
}

bool check_assumptions(const RunConfig& config, const CliFlags& flags,
                       std::ostream& err) {
  const ValidationReport v = validate_spec(config.problem);
  for (const auto& f : v.findings) err << "assumption: " << f << '\n';
  if (!v.ok() && !flags.force) {
    err << "refusing to run; pass --force to override\n";
    return false;
  }
  return true;
}

}  // namespace

int cmd_solve(const RunConfig& config, const CliFlags& flags, std::ostream& out,
              std::ostream& err) {
  if (!check_assumptions(config, flags, err)) return exit_config;
  std::optional<Objective> obj;
  try {
    obj.emplace(config.problem, grid_for(config));
  } catch (const std::invalid_argument& e) {
    err << "config: " << e.what() << '\n';
    return exit_config;
  }
  const fs::path dir = prepare_output(config);
  SolveResult result{Field(obj->grid()), obj->recover_density(Field(obj->grid())),
                     SolveReport{}};
  try {
    result = solve(*obj, config.solver);
  } catch (const SolveError& e) {
    err << e.what() << " at iteration " << e.iteration << '\n';
    write_node_csv((dir / "iterate_dump.csv").string(),
                   Field(obj->grid(), e.iterate));
    return exit_not_converged;
  } catch (const std::invalid_argument& e) {
    err << "config: " << e.what() << '\n';
    return exit_config;
  }
  const DiagnosticsReport diag = check_weak_solution(
      config.problem, result.density.m, result.u, config.eps_m, config.thresholds);
  write_node_csv((dir / "u.csv").string(), result.u);
  write_cell_csv((dir / "m.csv").string(), result.density.m);
  write_flux_csv((dir / "flux.csv").string(), result.density.flux);
  write_json((dir / "report.json").string(), report_to_json(result.report, obj->grid()));
  write_json((dir / "diagnostics.json").string(), diagnostics_to_json(diag));

  out << "solve: " << to_string(result.report.reason) << " after "
      << result.report.iterations << " iterations, objective "
      << result.report.objective << ", projected gradient "
      << result.report.pg_norm << '\n';
  for (const auto& c : diag.checks()) {
    out << "  " << c.name << " = " << c.value << (c.passed ? "" : "  (above threshold)")
        << '\n';
  }
  if (!result.report.converged) return exit_not_converged;
  if (flags.strict && !diag.passed()) return exit_verification;
  return exit_ok;
}

int cmd_oracle(const RunConfig& config, const CliFlags&, std::ostream& out,
               std::ostream& err) {
  std::string why;
  std::optional<OracleFields> o;
  try {
    o = build_oracle(config, grid_for(config), false, why);
  } catch (const std::exception& e) {
    why = e.what();
  }
  if (!o) {
    err << "oracle: " << why << '\n';
    return exit_config;
  }
  const fs::path dir = prepare_output(config);
  const CellVectorField du = cell_gradient(o->u);
  CellVectorField flux(o->u.grid);
  for (std::size_t c = 0; c < flux.size(); ++c) {
    const Vec dp = hamiltonian_gradient(
        config.problem.hamiltonian,
        local_coefficients(config.problem.hamiltonian, o->u.grid.cell_center(c)),
        du[c]);
    flux[c] = {o->m[c] * dp[0], o->m[c] * dp[1]};
  }
  write_node_csv((dir / "u.csv").string(), o->u);
  write_cell_csv((dir / "m.csv").string(), o->m);
  write_flux_csv((dir / "flux.csv").string(), flux);
  out << "oracle: wrote '" << o->family << "' fields to " << dir.string() << '\n';
  return exit_ok;
}

int cmd_verify(const RunConfig& config, const CliFlags& flags, std::ostream& out,
               std::ostream& err) {
  const fs::path in(flags.input.value_or(config.output_dir));
  std::optional<Field> u;
  std::optional<CellField> m;
  try {
    const Grid grid = grid_for(config);
    u = read_node_csv((in / "u.csv").string(), grid);
    m = read_cell_csv((in / "m.csv").string(), grid);
  } catch (const std::exception& e) {
    err << "verify: " << e.what() << '\n';
    return exit_config;
  }
  DiagnosticsReport diag;
  try {
    diag = check_weak_solution(config.problem, *m, *u, config.eps_m,
                               config.thresholds);
  } catch (const std::exception& e) {
    err << "verify: " << e.what() << '\n';
    return exit_config;
  }
  const fs::path dir = prepare_output(config);
  write_json((dir / "diagnostics.json").string(), diagnostics_to_json(diag));
  for (const auto& c : diag.checks()) {
    out << (c.passed ? "PASS " : "FAIL ") << c.name << " = " << c.value
        << " (threshold " << c.threshold << ")\n";
  }
  return diag.passed() ? exit_ok : exit_verification;
}

int cmd_compare(const RunConfig& config, const CliFlags& flags,
                std::ostream& out, std::ostream& err) {
  if (!check_assumptions(config, flags, err)) return exit_config;
  const Grid grid = grid_for(config);
  std::string why;
  const std::optional<OracleFields> o = build_oracle(config, grid, true, why);
  if (!o) {
    err << "compare: " << why << '\n';
    return exit_config;
  }
  const Objective obj(config.problem, grid);
  SolveResult result = solve(obj, config.solver);

  const double eps = config.eps_m.value_or(default_eps_m(o->m));
  const CellVectorField du_s = cell_gradient(result.u);
  const CellVectorField du_o = cell_gradient(o->u);
  double m_linf = 0.0, m_l2 = 0.0, du_linf = 0.0, du_l2 = 0.0;
  for (std::size_t c = 0; c < grid.cell_count(); ++c) {
    const double dm = result.density.m[c] - o->m[c];
    m_linf = std::max(m_linf, std::abs(dm));
    m_l2 += dm * dm;
    if (o->m[c] > eps) {
      const double d = std::hypot(du_s[c][0] - du_o[c][0], du_s[c][1] - du_o[c][1]);
      du_linf = std::max(du_linf, d);
      du_l2 += d * d;
    }
  }
  m_l2 = std::sqrt(m_l2 * grid.cell_volume());
  du_l2 = std::sqrt(du_l2 * grid.cell_volume());
  const double f_oracle = obj.evaluate(o->u);
  const double f_gap = std::abs(result.report.objective - f_oracle) /
                       std::max(1.0, std::abs(f_oracle));
  const bool passed = m_linf <= config.compare.m && du_linf <= config.compare.du &&
                      f_gap <= config.compare.objective;

  const fs::path dir = prepare_output(config);
  write_node_csv((dir / "u.csv").string(), result.u);
  write_cell_csv((dir / "m.csv").string(), result.density.m);
  write_json((dir / "compare.json").string(),
             {{"family", o->family},
              {"m_linf", m_linf},
              {"m_l2", m_l2},
              {"du_linf", du_linf},
              {"du_l2", du_l2},
              {"objective_solver", result.report.objective},
              {"objective_oracle", f_oracle},
              {"objective_gap", f_gap},
              {"eps_m", eps},
              {"tolerances",
               {{"m", config.compare.m},
                {"du", config.compare.du},
                {"objective", config.compare.objective}}},
              {"solver", report_to_json(result.report, grid)},
              {"passed", passed}});
  out << "compare: m_linf " << m_linf << ", du_linf " << du_linf
      << ", objective gap " << f_gap << (passed ? "  PASS" : "  FAIL") << '\n';
  return passed ? exit_ok : exit_verification;
}

int cmd_gradcheck(const RunConfig& config, const CliFlags&, std::ostream& out,
                  std::ostream& err) {
  std::optional<Objective> obj;
  try {
    obj.emplace(config.problem, grid_for(config));
  } catch (const std::invalid_argument& e) {
    err << "config: " << e.what() << '\n';
    return exit_config;
  }
  const GradientAudit audit = gradient_audit(*obj, 5, config.seed);
  out << "gradcheck: max relative error " << audit.max_relative_error << '\n';
  return audit.max_relative_error <= 1e-5 ? exit_ok : exit_verification;
}

int run_cli(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Stationary mean-field game solver and verifier"};
  app.require_subcommand(1);
  std::string config_path;
  std::string n_text;
  CliFlags flags;
  std::string out_dir;
  std::string input_dir;
  std::uint64_t seed = 0;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "Run configuration (JSON)")->required();
    sub->add_option("--out", out_dir, "Output directory");
    sub->add_option("--n", n_text, "Grid cells per axis: N or NX,NY");
    sub->add_option("--seed", seed, "Random seed");
    sub->add_flag("--strict", flags.strict, "Fail (exit 3) on verification failure");
    sub->add_flag("--force", flags.force, "Run despite assumption findings");
  };
  CLI::App* solve_cmd = app.add_subcommand("solve", "Minimize the functional");
  CLI::App* oracle_cmd = app.add_subcommand("oracle", "Write closed-form fields");
  CLI::App* verify_cmd = app.add_subcommand("verify", "Check stored fields");
  CLI::App* compare_cmd = app.add_subcommand("compare", "Solve and compare with an oracle");
  CLI::App* grad_cmd = app.add_subcommand("gradcheck", "Audit the gradient");
  for (auto* sub : {solve_cmd, oracle_cmd, verify_cmd, compare_cmd, grad_cmd}) {
    add_common(sub);
  }
  verify_cmd->add_option("--input", input_dir, "Directory with u.csv and m.csv");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? exit_ok : exit_config;
  }

  RunConfig config;
  try {
    config = load_config(config_path);
    if (!out_dir.empty()) flags.out = out_dir;
    if (!input_dir.empty()) flags.input = input_dir;
    if (!n_text.empty()) flags.n = parse_resolution(n_text);
    for (auto* sub : {solve_cmd, oracle_cmd, verify_cmd, compare_cmd, grad_cmd}) {
      if (sub->parsed() && sub->count("--seed") > 0) flags.seed = seed;
    }
    config = apply_flags(std::move(config), flags);
    grid_for(config);
  } catch (const std::exception& e) {
    err << "config: " << e.what() << '\n';
    return exit_config;
  }

  try {
    if (solve_cmd->parsed()) return cmd_solve(config, flags, out, err);
    if (oracle_cmd->parsed()) return cmd_oracle(config, flags, out, err);
    if (verify_cmd->parsed()) return cmd_verify(config, flags, out, err);
    if (compare_cmd->parsed()) return cmd_compare(config, flags, out, err);
    return cmd_gradcheck(config, flags, out, err);
  } catch (const std::invalid_argument& e) {
    err << "config: " << e.what() << '\n';
    return exit_config;
  }
}

}  // namespace mfg
