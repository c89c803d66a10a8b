#include "mfg/config.hpp"

#include <fstream>
#include <initializer_list>
#include <sstream>

namespace mfg {

using nlohmann::json;

namespace {

void allow_keys(const json& j, std::initializer_list<const char*> keys,
                const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + ": expected an object");
  for (const auto& [key, value] : j.items()) {
    bool known = false;
    for (const char* k : keys) known = known || key == k;
    if (!known) throw ConfigError(where + ": unknown key '" + key + "'");
  }
}

template <class T>
T get_or(const json& j, const char* key, T fallback, const std::string& where) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(where + "." + key + ": " + e.what());
  }
}

template <class T>
T require(const json& j, const char* key, const std::string& where) {
  if (!j.contains(key)) throw ConfigError(where + ": missing key '" + key + "'");
  return get_or<T>(j, key, T{}, where);
}

std::string axis_name(Axis a) { return a == Axis::x ? "x" : "y"; }

Axis axis_from(const json& j, const std::string& where) {
  const auto name = get_or<std::string>(j, "axis", "x", where);
  if (name == "x") return Axis::x;
  if (name == "y") return Axis::y;
  throw ConfigError(where + ": axis must be 'x' or 'y'");
}

std::string branch_name(Branch b) { return b == Branch::plus ? "plus" : "minus"; }

}  // namespace

// ---------------------------------------------------------------------------

json expr_to_json(const Expr& e) {
  const auto& p = e.params();
  json j;
  j["kind"] = to_string(e.kind());
  switch (e.kind()) {
    case Expr::Kind::constant:
      return p[0];
    case Expr::Kind::sine:
      j["amplitude"] = p[0];
      j["frequency"] = p[1];
      j["phase"] = p[2];
      j["offset"] = p[3];
      j["axis"] = axis_name(e.axis());
      break;
    case Expr::Kind::gaussian_bump:
      j["amplitude"] = p[0];
      j["center"] = {p[1], p[2]};
      j["width"] = p[3];
      j["offset"] = p[4];
      break;
    case Expr::Kind::polynomial:
      j["coeffs"] = p;
      j["axis"] = axis_name(e.axis());
      break;
    case Expr::Kind::table:
      j["nodes"] = e.nodes();
      j["values"] = p;
      j["axis"] = axis_name(e.axis());
      break;
    case Expr::Kind::linear:
      j["c0"] = p[0];
      j["cx"] = p[1];
      j["cy"] = p[2];
      break;
    case Expr::Kind::exp_trig_value:
      j["scale"] = p[0];
      break;
    case Expr::Kind::exp_trig_potential:
    case Expr::Kind::exp_trig_influx:
    case Expr::Kind::sin_radius_sq:
      break;
    case Expr::Kind::sum:
    case Expr::Kind::product: {
      json list = json::array();
      for (const auto& c : e.children()) list.push_back(expr_to_json(c));
      j[e.kind() == Expr::Kind::sum ? "terms" : "factors"] = list;
      break;
    }
    case Expr::Kind::positive_part:
      j["arg"] = expr_to_json(e.children()[0]);
      break;
  }
  return j;
}

Expr expr_from_json(const json& j) {
  const std::string where = "expression";
  if (j.is_number()) return Expr::constant(j.get<double>());
  if (!j.is_object()) {
    throw ConfigError("expression: expected a number or an object");
  }
  const auto kind_name = require<std::string>(j, "kind", where);
  Expr::Kind kind;
  try {
    kind = expr_kind_from_string(kind_name);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  const std::string w = where + " '" + kind_name + "'";
  try {
    switch (kind) {
      case Expr::Kind::constant:
        allow_keys(j, {"kind", "value"}, w);
        return Expr::constant(require<double>(j, "value", w));
      case Expr::Kind::sine:
        allow_keys(j, {"kind", "amplitude", "frequency", "phase", "offset", "axis"}, w);
        return Expr::sine(get_or(j, "amplitude", 1.0, w),
                          get_or(j, "frequency", 1.0, w),
                          get_or(j, "phase", 0.0, w), get_or(j, "offset", 0.0, w),
                          axis_from(j, w));
      case Expr::Kind::gaussian_bump: {
        allow_keys(j, {"kind", "amplitude", "center", "width", "offset"}, w);
        const auto c = get_or<std::vector<double>>(j, "center", {0.0, 0.0}, w);
        if (c.empty() || c.size() > 2) throw ConfigError(w + ": center needs 1 or 2 entries");
        return Expr::gaussian_bump(get_or(j, "amplitude", 1.0, w),
                                   {c[0], c.size() > 1 ? c[1] : 0.0},
                                   get_or(j, "width", 0.1, w),
                                   get_or(j, "offset", 0.0, w));
      }
      case Expr::Kind::polynomial:
        allow_keys(j, {"kind", "coeffs", "axis"}, w);
        return Expr::polynomial(require<std::vector<double>>(j, "coeffs", w),
                                axis_from(j, w));
      case Expr::Kind::table:
        allow_keys(j, {"kind", "nodes", "values", "axis"}, w);
        return Expr::table(require<std::vector<double>>(j, "nodes", w),
                           require<std::vector<double>>(j, "values", w),
                           axis_from(j, w));
      case Expr::Kind::linear:
        allow_keys(j, {"kind", "c0", "cx", "cy"}, w);
        return Expr::linear(get_or(j, "c0", 0.0, w), get_or(j, "cx", 0.0, w),
                            get_or(j, "cy", 0.0, w));
      case Expr::Kind::exp_trig_potential:
        allow_keys(j, {"kind"}, w);
        return Expr::exp_trig_potential();
      case Expr::Kind::exp_trig_value:
        allow_keys(j, {"kind", "scale"}, w);
        return Expr::exp_trig_value(get_or(j, "scale", 1.0, w));
      case Expr::Kind::exp_trig_influx:
        allow_keys(j, {"kind"}, w);
        return Expr::exp_trig_influx();
      case Expr::Kind::sin_radius_sq:
        allow_keys(j, {"kind"}, w);
        return Expr::sin_radius_sq();
      case Expr::Kind::sum:
      case Expr::Kind::product: {
        const char* key = kind == Expr::Kind::sum ? "terms" : "factors";
        allow_keys(j, {"kind", key}, w);
        if (!j.contains(key) || !j.at(key).is_array()) {
          throw ConfigError(w + ": '" + key + "' must be a list");
        }
        std::vector<Expr> parts;
        for (const auto& c : j.at(key)) parts.push_back(expr_from_json(c));
        return kind == Expr::Kind::sum ? Expr::sum(std::move(parts))
                                       : Expr::product(std::move(parts));
      }
      case Expr::Kind::positive_part:
        allow_keys(j, {"kind", "arg"}, w);
        if (!j.contains("arg")) throw ConfigError(w + ": missing key 'arg'");
        return Expr::positive_part(expr_from_json(j.at("arg")));
    }
  } catch (const std::invalid_argument& e) {
    throw ConfigError(w + ": " + e.what());
  }
  throw ConfigError(w + ": unsupported kind");
}

// ---------------------------------------------------------------------------

json problem_to_json(const ProblemSpec& p) {
  json j;
  json domain;
  domain["dim"] = p.domain.dim;
  if (p.domain.dim == 1) {
    domain["lo"] = {p.domain.lo[0]};
    domain["hi"] = {p.domain.hi[0]};
  } else {
    domain["lo"] = {p.domain.lo[0], p.domain.lo[1]};
    domain["hi"] = {p.domain.hi[0], p.domain.hi[1]};
  }
  j["domain"] = domain;

  json coupling;
  coupling["variant"] = to_string(p.coupling.variant);
  coupling["a"] = p.coupling.a;
  coupling["alpha"] = p.coupling.alpha;
  if (p.coupling.variant == CouplingSpec::Variant::tabulated) {
    coupling["table_z"] = p.coupling.table_z;
    coupling["table_slope"] = p.coupling.table_slope;
  }
  j["coupling"] = coupling;

  json ham;
  ham["variant"] = to_string(p.hamiltonian.variant);
  ham["beta"] = p.hamiltonian.beta;
  ham["b"] = expr_to_json(p.hamiltonian.b);
  ham["potential"] = expr_to_json(p.hamiltonian.potential);
  j["hamiltonian"] = ham;

  json faces = json::object();
  for (Face f : {Face::left, Face::right, Face::bottom, Face::top}) {
    if (auto k = p.boundary.kind(f)) faces[to_string(f)] = to_string(*k);
  }
  j["boundary"] = {{"faces", faces},
                   {"influx", expr_to_json(p.boundary.influx)},
                   {"exit_cost", expr_to_json(p.boundary.exit_cost)}};
  return j;
}

ProblemSpec problem_from_json(const json& j) {
  const std::string w = "problem";
  allow_keys(j, {"domain", "coupling", "hamiltonian", "boundary"}, w);
  ProblemSpec p;
  try {
    const json& d = j.at("domain");
    allow_keys(d, {"dim", "lo", "hi"}, "domain");
    const int dim = require<int>(d, "dim", "domain");
    const auto lo = require<std::vector<double>>(d, "lo", "domain");
    const auto hi = require<std::vector<double>>(d, "hi", "domain");
    if (dim == 1 && lo.size() == 1 && hi.size() == 1) {
      p.domain = Domain::interval(lo[0], hi[0]);
    } else if (dim == 2 && lo.size() == 2 && hi.size() == 2) {
      p.domain = Domain::rectangle(lo[0], hi[0], lo[1], hi[1]);
    } else {
      throw ConfigError("domain: dim must be 1 or 2 with matching lo/hi");
    }

    const json& c = j.at("coupling");
    allow_keys(c, {"variant", "a", "alpha", "table_z", "table_slope"}, "coupling");
    const auto variant =
        coupling_variant_from_string(require<std::string>(c, "variant", "coupling"));
    switch (variant) {
      case CouplingSpec::Variant::power:
        p.coupling = CouplingSpec::power(get_or(c, "a", 1.0, "coupling"),
                                         get_or(c, "alpha", 2.0, "coupling"));
        break;
      case CouplingSpec::Variant::quadratic_positive_part:
        p.coupling = CouplingSpec::quadratic_positive_part();
        break;
      case CouplingSpec::Variant::tabulated:
        p.coupling = CouplingSpec::tabulated(
            require<std::vector<double>>(c, "table_z", "coupling"),
            require<std::vector<double>>(c, "table_slope", "coupling"),
            get_or(c, "alpha", 2.0, "coupling"));
        break;
    }
    if (c.contains("a")) p.coupling.a = get_or(c, "a", 1.0, "coupling");
    if (c.contains("alpha")) p.coupling.alpha = get_or(c, "alpha", 2.0, "coupling");

    const json& h = j.at("hamiltonian");
    allow_keys(h, {"variant", "beta", "b", "potential"}, "hamiltonian");
    const auto hv = hamiltonian_variant_from_string(
        require<std::string>(h, "variant", "hamiltonian"));
    const Expr potential = h.contains("potential")
                               ? expr_from_json(h.at("potential"))
                               : (hv == HamiltonianSpec::Variant::model
                                      ? Expr::sin_radius_sq()
                                      : Expr::constant(0.0));
    if (hv == HamiltonianSpec::Variant::quadratic) {
      p.hamiltonian = HamiltonianSpec::quadratic(potential);
    } else {
      p.hamiltonian = HamiltonianSpec::model(
          get_or(h, "beta", 2.0, "hamiltonian"),
          h.contains("b") ? expr_from_json(h.at("b")) : Expr::constant(1.0),
          potential);
    }
    if (h.contains("beta")) p.hamiltonian.beta = get_or(h, "beta", 2.0, "hamiltonian");
    if (h.contains("b")) p.hamiltonian.b = expr_from_json(h.at("b"));

    const json& b = j.at("boundary");
    allow_keys(b, {"faces", "influx", "exit_cost"}, "boundary");
    const json& faces = b.at("faces");
    if (!faces.is_object()) throw ConfigError("boundary.faces: expected an object");
    for (const auto& [name, kind] : faces.items()) {
      const Face f = face_from_string(name);
      const auto k = kind.get<std::string>();
      if (k == "neumann") {
        p.boundary.set(f, BoundaryKind::neumann);
      } else if (k == "dirichlet") {
        p.boundary.set(f, BoundaryKind::dirichlet);
      } else {
        throw ConfigError("boundary.faces." + name +
                          ": must be 'neumann' or 'dirichlet'");
      }
    }
    if (b.contains("influx")) p.boundary.influx = expr_from_json(b.at("influx"));
    if (b.contains("exit_cost")) {
      p.boundary.exit_cost = expr_from_json(b.at("exit_cost"));
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("problem: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("problem: ") + e.what());
  }
  return p;
}

// ---------------------------------------------------------------------------

json config_to_json(const RunConfig& c) {
  json j;
  j["problem"] = problem_to_json(c.problem);
  if (c.problem.domain.dim == 1) {
    j["n"] = {c.cells[0]};
  } else {
    j["n"] = {c.cells[0], c.cells[1]};
  }
  const SolveOptions& s = c.solver;
  j["solver"] = {{"max_iters", s.max_iters},
                 {"tol_pg", s.tol_pg},
                 {"tol_f", s.tol_f},
                 {"stall_window", s.stall_window},
                 {"plateau_window", s.plateau_window},
                 {"armijo_c", s.armijo_c},
                 {"shrink", s.shrink},
                 {"initial_step", s.initial_step},
                 {"init", to_string(s.init)}};
  if (s.init == InitMode::given) j["solver"]["initial"] = s.initial;
  j["output"] = c.output_dir;
  if (c.oracle) {
    json o;
    o["family"] = c.oracle->family;
    o["branch"] = branch_name(c.oracle->branch);
    o["function"] = c.oracle->function;
    if (!c.oracle->polynomial.empty()) o["polynomial"] = c.oracle->polynomial;
    o["density_scale"] = c.oracle->density_scale;
    o["q"] = c.oracle->q;
    j["oracle"] = o;
  }
  j["compare"] = {{"m_tol", c.compare.m},
                  {"du_tol", c.compare.du},
                  {"objective_tol", c.compare.objective}};
  const Thresholds& t = c.thresholds;
  j["thresholds"] = {{"hj_residual_pos", t.hj_residual_pos},
                     {"hj_inequality", t.hj_inequality},
                     {"continuity", t.continuity},
                     {"neumann", t.neumann},
                     {"dirichlet_sign", t.dirichlet_sign},
                     {"complementarity", t.complementarity},
                     {"mass_balance", t.mass_balance}};
  if (c.eps_m) j["eps_m"] = *c.eps_m;
  j["seed"] = c.seed;
  return j;
}

RunConfig config_from_json(const json& j) {
  allow_keys(j, {"problem", "n", "solver", "output", "oracle", "compare",
                 "thresholds", "eps_m", "seed"},
             "config");
  RunConfig c;
  if (!j.contains("problem")) throw ConfigError("config: missing key 'problem'");
  c.problem = problem_from_json(j.at("problem"));
  try {
    if (j.contains("n")) {
      const json& n = j.at("n");
      if (n.is_number_integer()) {
        c.cells = {n.get<int>(), n.get<int>()};
      } else {
        const auto v = n.get<std::vector<int>>();
        if (v.empty() || v.size() > 2) throw ConfigError("n: one or two entries");
        c.cells = {v[0], v.size() > 1 ? v[1] : v[0]};
      }
    }
    if (c.problem.domain.dim == 1) c.cells[1] = 1;

    if (j.contains("solver")) {
      const json& s = j.at("solver");
      const std::string w = "solver";
      allow_keys(s, {"max_iters", "tol_pg", "tol_f", "stall_window",
                     "plateau_window", "armijo_c", "shrink", "initial_step",
                     "init", "initial"},
                 w);
      SolveOptions& o = c.solver;
      o.max_iters = get_or(s, "max_iters", o.max_iters, w);
      o.tol_pg = get_or(s, "tol_pg", o.tol_pg, w);
      o.tol_f = get_or(s, "tol_f", o.tol_f, w);
      o.stall_window = get_or(s, "stall_window", o.stall_window, w);
      o.plateau_window = get_or(s, "plateau_window", o.plateau_window, w);
      o.armijo_c = get_or(s, "armijo_c", o.armijo_c, w);
      o.shrink = get_or(s, "shrink", o.shrink, w);
      o.initial_step = get_or(s, "initial_step", o.initial_step, w);
      o.init = init_mode_from_string(get_or<std::string>(s, "init", "psi", w));
      o.initial = get_or<std::vector<double>>(s, "initial", {}, w);
      o.validate();
    }
    c.output_dir = get_or<std::string>(j, "output", c.output_dir, "config");

    if (j.contains("oracle")) {
      const json& o = j.at("oracle");
      const std::string w = "oracle";
      allow_keys(o, {"family", "branch", "function", "polynomial",
                     "density_scale", "q"},
                 w);
      OracleSelection sel;
      sel.family = require<std::string>(o, "family", w);
      const auto br = get_or<std::string>(o, "branch", "plus", w);
      if (br != "plus" && br != "minus") {
        throw ConfigError("oracle.branch: must be 'plus' or 'minus'");
      }
      sel.branch = br == "plus" ? Branch::plus : Branch::minus;
      sel.function = get_or<std::string>(o, "function", sel.function, w);
      sel.polynomial = get_or<std::vector<double>>(o, "polynomial", {}, w);
      sel.density_scale = get_or(o, "density_scale", 1.0, w);
      sel.q = get_or(o, "q", 1.0, w);
      c.oracle = sel;
    }
    if (j.contains("compare")) {
      const json& o = j.at("compare");
      allow_keys(o, {"m_tol", "du_tol", "objective_tol"}, "compare");
      c.compare.m = get_or(o, "m_tol", c.compare.m, "compare");
      c.compare.du = get_or(o, "du_tol", c.compare.du, "compare");
      c.compare.objective =
          get_or(o, "objective_tol", c.compare.objective, "compare");
    }
    if (j.contains("thresholds")) {
      const json& t = j.at("thresholds");
      const std::string w = "thresholds";
      allow_keys(t, {"hj_residual_pos", "hj_inequality", "continuity", "neumann",
                     "dirichlet_sign", "complementarity", "mass_balance"},
                 w);
      Thresholds& th = c.thresholds;
      th.hj_residual_pos = get_or(t, "hj_residual_pos", th.hj_residual_pos, w);
      th.hj_inequality = get_or(t, "hj_inequality", th.hj_inequality, w);
      th.continuity = get_or(t, "continuity", th.continuity, w);
      th.neumann = get_or(t, "neumann", th.neumann, w);
      th.dirichlet_sign = get_or(t, "dirichlet_sign", th.dirichlet_sign, w);
      th.complementarity = get_or(t, "complementarity", th.complementarity, w);
      th.mass_balance = get_or(t, "mass_balance", th.mass_balance, w);
    }
    if (j.contains("eps_m")) c.eps_m = get_or(j, "eps_m", 0.0, "config");
    c.seed = get_or<std::uint64_t>(j, "seed", c.seed, "config");
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  json j;
  try {
    j = json::parse(in, nullptr, true, /*ignore_comments=*/true);
  } catch (const json::parse_error& e) {
    throw ConfigError(path + ": " + e.what());
  }
  return config_from_json(j);
}

void save_config(const RunConfig& c, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write config file '" + path + "'");
  out << config_to_json(c).dump(2) << '\n';
}

}  // namespace mfg
