#include "mfg/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>
#include <stdexcept>

namespace mfg {

// ---------------------------------------------------------------------------
// Coupling
// ---------------------------------------------------------------------------

CouplingSpec CouplingSpec::power(double a, double alpha) {
  CouplingSpec s;
  s.variant = Variant::power;
  s.a = a;
  s.alpha = alpha;
  return s;
}

CouplingSpec CouplingSpec::quadratic_positive_part() {
  CouplingSpec s;
  s.variant = Variant::quadratic_positive_part;
  s.a = 1.0;
  s.alpha = 2.0;
  return s;
}

CouplingSpec CouplingSpec::tabulated(std::vector<double> z,
                                     std::vector<double> slope, double alpha) {
  if (z.size() < 2 || z.size() != slope.size()) {
    throw std::invalid_argument(
        "tabulated coupling: need at least two nodes with one slope each");
  }
  for (std::size_t k = 1; k < z.size(); ++k) {
    if (!(z[k] > z[k - 1])) {
      throw std::invalid_argument(
          "tabulated coupling: nodes must be strictly increasing");
    }
  }
  CouplingSpec s;
  s.variant = Variant::tabulated;
  s.alpha = alpha;
  s.table_z = std::move(z);
  s.table_slope = std::move(slope);
  return s;
}

namespace {

// Integral of the piecewise-linear G' of a tabulated coupling over [lo, hi],
// lo <= hi, accumulated segment by segment.
double tabulated_integral(const CouplingSpec& s, double lo, double hi) {
  const auto& z = s.table_z;
  const auto& d = s.table_slope;
  const std::size_t n = z.size();
  const double tail = (d[n - 1] - d[n - 2]) / (z[n - 1] - z[n - 2]);
  double total = 0.0;
  // left constant region
  if (lo < z[0]) {
    const double e = std::min(hi, z[0]);
    total += d[0] * (e - lo);
  }
  for (std::size_t k = 0; k + 1 < n; ++k) {
    const double a = std::max(lo, z[k]);
    const double b = std::min(hi, z[k + 1]);
    if (b <= a) continue;
    const double slope = (d[k + 1] - d[k]) / (z[k + 1] - z[k]);
    const double ga = d[k] + slope * (a - z[k]);
    const double gb = d[k] + slope * (b - z[k]);
    total += 0.5 * (ga + gb) * (b - a);
  }
  if (hi > z[n - 1]) {
    const double a = std::max(lo, z[n - 1]);
    const double ga = d[n - 1] + tail * (a - z[n - 1]);
    const double gb = d[n - 1] + tail * (hi - z[n - 1]);
    total += 0.5 * (ga + gb) * (hi - a);
  }
  return total;
}

double tabulated_slope(const CouplingSpec& s, double t) {
  const auto& z = s.table_z;
  const auto& d = s.table_slope;
  const std::size_t n = z.size();
  if (t <= z[0]) return d[0];
  if (t >= z[n - 1]) {
    const double tail = (d[n - 1] - d[n - 2]) / (z[n - 1] - z[n - 2]);
    return d[n - 1] + tail * (t - z[n - 1]);
  }
  const auto hi = std::upper_bound(z.begin(), z.end(), t);
  const auto k = static_cast<std::size_t>(hi - z.begin());
  // written as an increment so flat segments stay exact and the result is
  // monotone in t under rounding
  const double w = (t - z[k - 1]) / (z[k] - z[k - 1]);
  return d[k - 1] + w * (d[k] - d[k - 1]);
}

}  // namespace

double coupling_G(const CouplingSpec& spec, double z) {
  switch (spec.variant) {
    case CouplingSpec::Variant::power:
      return z < -1.0 ? 0.0 : spec.a * std::pow(z + 1.0, spec.alpha);
    case CouplingSpec::Variant::quadratic_positive_part: {
      const double zp = std::max(z, 0.0);
      return 0.5 * zp * zp;
    }
    case CouplingSpec::Variant::tabulated: {
      const double z0 = spec.table_z.front();
      return z >= z0 ? tabulated_integral(spec, z0, z)
                     : -tabulated_integral(spec, z, z0);
    }
  }
  return 0.0;
}

double coupling_Gprime(const CouplingSpec& spec, double z) {
  switch (spec.variant) {
    case CouplingSpec::Variant::power:
      return z <= -1.0 ? 0.0
                       : spec.a * spec.alpha * std::pow(z + 1.0, spec.alpha - 1.0);
    case CouplingSpec::Variant::quadratic_positive_part:
      return std::max(z, 0.0);
    case CouplingSpec::Variant::tabulated:
      return tabulated_slope(spec, z);
  }
  return 0.0;
}

double coupling_g(const CouplingSpec& spec, double mu) {
  if (!std::isfinite(mu) || mu < 0.0) {
    throw std::domain_error("coupling_g: mu must be finite and non-negative");
  }
  switch (spec.variant) {
    case CouplingSpec::Variant::power:
      // G' = 0 on (-inf, -1], so the max convention gives g(0) = -1.
      if (mu == 0.0) return -1.0;
      return std::pow(mu / (spec.a * spec.alpha), 1.0 / (spec.alpha - 1.0)) -
             1.0;
    case CouplingSpec::Variant::quadratic_positive_part:
      return mu;
    case CouplingSpec::Variant::tabulated: {
      const auto& z = spec.table_z;
      const auto& d = spec.table_slope;
      const std::size_t n = z.size();
      const double tail = (d[n - 1] - d[n - 2]) / (z[n - 1] - z[n - 2]);
      if (mu < d[0]) {
        throw std::domain_error("coupling_g: mu below the range of G'");
      }
      if (mu > d[n - 1] || (mu == d[n - 1] && tail > 0.0)) {
        if (!(tail > 0.0)) {
          throw std::domain_error("coupling_g: mu above the range of G'");
        }
        return z[n - 1] + (mu - d[n - 1]) / tail;
      }
      // Largest node with slope <= mu; G' is non-decreasing.
      std::size_t k = 0;
      while (k + 1 < n && d[k + 1] <= mu) ++k;
      if (d[k] == mu) return z[k];
      const double w = (mu - d[k]) / (d[k + 1] - d[k]);
      return z[k] + w * (z[k + 1] - z[k]);
    }
  }
  return 0.0;
}

double coupling_change(const CouplingSpec& spec, double z, double dz) {
  if (dz == 0.0) return 0.0;
  switch (spec.variant) {
    case CouplingSpec::Variant::power: {
      const double y0 = z + 1.0;
      const double y1 = y0 + dz;
      if (y0 > 0.0 && y1 > 0.0) {
        return spec.a * std::pow(y0, spec.alpha) *
               std::expm1(spec.alpha * std::log1p(dz / y0));
      }
      return coupling_G(spec, z + dz) - coupling_G(spec, z);
    }
    case CouplingSpec::Variant::quadratic_positive_part: {
      const double z1 = z + dz;
      if (z >= 0.0 && z1 >= 0.0) return dz * (z + 0.5 * dz);
      return coupling_G(spec, z1) - coupling_G(spec, z);
    }
    case CouplingSpec::Variant::tabulated:
      return dz > 0.0 ? tabulated_integral(spec, z, z + dz)
                      : -tabulated_integral(spec, z + dz, z);
  }
  return 0.0;
}

std::optional<double> coupling_flat_end(const CouplingSpec& spec) {
  switch (spec.variant) {
    case CouplingSpec::Variant::power:
      return -1.0;
    case CouplingSpec::Variant::quadratic_positive_part:
      return 0.0;
    case CouplingSpec::Variant::tabulated:
      if (spec.table_slope.front() != 0.0) return std::nullopt;
      return coupling_g(spec, 0.0);
  }
  return std::nullopt;
}

std::string to_string(CouplingSpec::Variant v) {
  switch (v) {
    case CouplingSpec::Variant::power: return "power";
    case CouplingSpec::Variant::quadratic_positive_part:
      return "quadratic_positive_part";
    case CouplingSpec::Variant::tabulated: return "tabulated";
  }
  return "unknown";
}

CouplingSpec::Variant coupling_variant_from_string(const std::string& name) {
  if (name == "power") return CouplingSpec::Variant::power;
  if (name == "quadratic_positive_part")
    return CouplingSpec::Variant::quadratic_positive_part;
  if (name == "tabulated") return CouplingSpec::Variant::tabulated;
  throw std::invalid_argument("unknown coupling variant '" + name + "'");
}

// ---------------------------------------------------------------------------
// Hamiltonian
// ---------------------------------------------------------------------------

HamiltonianSpec HamiltonianSpec::quadratic(Expr potential) {
  HamiltonianSpec s;
  s.variant = Variant::quadratic;
  s.beta = 2.0;
  s.potential = std::move(potential);
  return s;
}

HamiltonianSpec HamiltonianSpec::model(double beta, Expr b, Expr potential) {
  HamiltonianSpec s;
  s.variant = Variant::model;
  s.beta = beta;
  s.b = std::move(b);
  s.potential = std::move(potential);
  return s;
}

LocalCoefficients local_coefficients(const HamiltonianSpec& spec, Point x) {
  LocalCoefficients c;
  c.potential = spec.potential(x);
  c.b = spec.variant == HamiltonianSpec::Variant::model ? spec.b(x) : 1.0;
  return c;
}

namespace {
double norm_sq(Vec p) { return p[0] * p[0] + p[1] * p[1]; }
}  // namespace

double hamiltonian_value(const HamiltonianSpec& spec, LocalCoefficients c,
                         Vec p) {
  const double p2 = norm_sq(p);
  if (spec.variant == HamiltonianSpec::Variant::quadratic) {
    return 0.5 * p2 + c.potential;
  }
  // (|p|^2 + 1)^{beta/2} - 1 = expm1(beta/2 * log1p(|p|^2))
  return c.b * std::expm1(0.5 * spec.beta * std::log1p(p2)) + c.potential;
}

Vec hamiltonian_gradient(const HamiltonianSpec& spec, LocalCoefficients c,
                         Vec p) {
  if (spec.variant == HamiltonianSpec::Variant::quadratic) return p;
  const double s =
      c.b * spec.beta * std::pow(norm_sq(p) + 1.0, 0.5 * spec.beta - 1.0);
  return {s * p[0], s * p[1]};
}

double hamiltonian_change(const HamiltonianSpec& spec, LocalCoefficients c,
                          Vec p, Vec dp) {
  const double cross = p[0] * dp[0] + p[1] * dp[1];
  const double d2 = norm_sq(dp);
  if (spec.variant == HamiltonianSpec::Variant::quadratic) {
    return cross + 0.5 * d2;
  }
  const double base = norm_sq(p) + 1.0;
  const double rel = (2.0 * cross + d2) / base;
  return c.b * std::pow(base, 0.5 * spec.beta) *
         std::expm1(0.5 * spec.beta * std::log1p(rel));
}

double hamiltonian_H(const HamiltonianSpec& spec, Point x, Vec p) {
  return hamiltonian_value(spec, local_coefficients(spec, x), p);
}

Vec hamiltonian_DpH(const HamiltonianSpec& spec, Point x, Vec p) {
  return hamiltonian_gradient(spec, local_coefficients(spec, x), p);
}

std::string to_string(HamiltonianSpec::Variant v) {
  return v == HamiltonianSpec::Variant::quadratic ? "quadratic" : "model";
}

HamiltonianSpec::Variant hamiltonian_variant_from_string(
    const std::string& name) {
  if (name == "quadratic") return HamiltonianSpec::Variant::quadratic;
  if (name == "model") return HamiltonianSpec::Variant::model;
  throw std::invalid_argument("unknown hamiltonian variant '" + name + "'");
}

// ---------------------------------------------------------------------------
// Domain and boundary
// ---------------------------------------------------------------------------

Domain Domain::interval(double lo, double hi) {
  Domain d;
  d.dim = 1;
  d.lo = {lo, 0.0};
  d.hi = {hi, 0.0};
  return d;
}

Domain Domain::rectangle(double x_lo, double x_hi, double y_lo, double y_hi) {
  Domain d;
  d.dim = 2;
  d.lo = {x_lo, y_lo};
  d.hi = {x_hi, y_hi};
  return d;
}

bool Domain::contains(Point x, double slack) const {
  for (int k = 0; k < dim; ++k) {
    const double span = hi[k] - lo[k];
    const double tol = slack * std::max(1.0, std::abs(span));
    if (!(x[k] >= lo[k] - tol && x[k] <= hi[k] + tol)) return false;
  }
  return true;
}

std::string to_string(Face f) {
  switch (f) {
    case Face::left: return "left";
    case Face::right: return "right";
    case Face::bottom: return "bottom";
    case Face::top: return "top";
  }
  return "unknown";
}

Face face_from_string(const std::string& name) {
  if (name == "left") return Face::left;
  if (name == "right") return Face::right;
  if (name == "bottom") return Face::bottom;
  if (name == "top") return Face::top;
  throw std::invalid_argument("unknown boundary face '" + name + "'");
}

std::string to_string(BoundaryKind k) {
  return k == BoundaryKind::neumann ? "neumann" : "dirichlet";
}

std::vector<Face> domain_faces(int dim) {
  if (dim == 1) return {Face::left, Face::right};
  return {Face::left, Face::right, Face::bottom, Face::top};
}

namespace {

void require_inside(const ProblemSpec& problem, Point x) {
  if (!problem.domain.contains(x)) {
    std::ostringstream os;
    os << "point (" << x[0] << ", " << x[1] << ") outside the domain";
    throw std::domain_error(os.str());
  }
}

}  // namespace

double hamiltonian_H(const ProblemSpec& problem, Point x, Vec p) {
  require_inside(problem, x);
  return hamiltonian_H(problem.hamiltonian, x, p);
}

Vec hamiltonian_DpH(const ProblemSpec& problem, Point x, Vec p) {
  require_inside(problem, x);
  return hamiltonian_DpH(problem.hamiltonian, x, p);
}

// ---------------------------------------------------------------------------
// Validation
// ---------------------------------------------------------------------------

namespace {

constexpr int kConvexityPairs = 1000;
constexpr int kFieldSamplesPerAxis = 33;
constexpr int kFaceSamples = 101;
constexpr int kLagrangianSamples = 2000;

std::vector<Point> domain_samples(const Domain& d) {
  std::vector<Point> pts;
  const int ny = d.dim == 2 ? kFieldSamplesPerAxis : 1;
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < kFieldSamplesPerAxis; ++i) {
      Point x{};
      x[0] = d.lo[0] + (d.hi[0] - d.lo[0]) * i / (kFieldSamplesPerAxis - 1);
      if (d.dim == 2) {
        x[1] = d.lo[1] + (d.hi[1] - d.lo[1]) * j / (kFieldSamplesPerAxis - 1);
      }
      pts.push_back(x);
    }
  }
  return pts;
}

std::vector<Point> face_samples(const Domain& d, Face f) {
  std::vector<Point> pts;
  if (d.dim == 1) {
    pts.push_back(Point{f == Face::left ? d.lo[0] : d.hi[0], 0.0});
    return pts;
  }
  for (int k = 0; k < kFaceSamples; ++k) {
    const double s = static_cast<double>(k) / (kFaceSamples - 1);
    switch (f) {
      case Face::left:
        pts.push_back({d.lo[0], d.lo[1] + s * (d.hi[1] - d.lo[1])});
        break;
      case Face::right:
        pts.push_back({d.hi[0], d.lo[1] + s * (d.hi[1] - d.lo[1])});
        break;
      case Face::bottom:
        pts.push_back({d.lo[0] + s * (d.hi[0] - d.lo[0]), d.lo[1]});
        break;
      case Face::top:
        pts.push_back({d.lo[0] + s * (d.hi[0] - d.lo[0]), d.hi[1]});
        break;
    }
  }
  return pts;
}

bool midpoint_convex(double fu, double fv, double fmid) {
  const double slack = 1e-12 * std::max({1.0, std::abs(fu), std::abs(fv)});
  return fmid <= 0.5 * (fu + fv) + slack;
}

}  // namespace

ValidationReport validate_spec(const ProblemSpec& problem) {
  ValidationReport report;
  auto& out = report.findings;
  const auto& cp = problem.coupling;
  const auto& hs = problem.hamiltonian;
  const auto& dom = problem.domain;

  if (dom.dim != 1 && dom.dim != 2) out.push_back("domain dimension must be 1 or 2");
  for (int k = 0; k < dom.dim; ++k) {
    if (!(dom.hi[k] > dom.lo[k])) out.push_back("domain extents must be ordered");
  }
  if (!out.empty()) return report;

  // Coupling.
  if (!(cp.alpha > 1.0)) out.push_back("alpha must exceed 1");
  if (cp.variant == CouplingSpec::Variant::power && !(cp.a > 0.0)) {
    out.push_back("power coupling amplitude a must be positive");
  }
  if (cp.variant == CouplingSpec::Variant::tabulated) {
    const auto& d = cp.table_slope;
    if (d.front() < 0.0) out.push_back("tabulated G' must be non-negative");
    for (std::size_t k = 1; k < d.size(); ++k) {
      if (d[k] < d[k - 1]) {
        out.push_back("tabulated G' must be non-decreasing (G convex)");
        break;
      }
    }
    if (d.size() >= 2 && !(d.back() > d[d.size() - 2])) {
      out.push_back("tabulated G' must grow beyond the last node (coercivity)");
    }
  }

  std::mt19937_64 rng(20240601);
  std::uniform_real_distribution<double> zdist(-20.0, 20.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  if (cp.alpha > 1.0) {
    bool convex = true;
    bool monotone = true;
    for (int k = 0; k < kConvexityPairs; ++k) {
      const double u = zdist(rng);
      const double v = zdist(rng);
      const double gu = coupling_G(cp, u);
      const double gv = coupling_G(cp, v);
      if (!midpoint_convex(gu, gv, coupling_G(cp, 0.5 * (u + v)))) convex = false;
      const double lo = std::min(u, v);
      const double hi = std::max(u, v);
      if (coupling_G(cp, hi) < coupling_G(cp, lo) ||
          coupling_Gprime(cp, lo) < 0.0 ||
          coupling_Gprime(cp, hi) < coupling_Gprime(cp, lo)) {
        monotone = false;
      }
    }
    if (!convex) out.push_back("G fails midpoint convexity");
    if (!monotone) out.push_back("G must be non-decreasing with non-decreasing G'");
  }

  // Hamiltonian.
  if (hs.variant == HamiltonianSpec::Variant::model && !(hs.beta > 1.0)) {
    out.push_back("beta must exceed 1");
  }
  const auto samples = domain_samples(dom);
  double bmin = std::numeric_limits<double>::infinity();
  double bmax = -std::numeric_limits<double>::infinity();
  bool potential_finite = true;
  bool psi_finite = true;
  for (const auto& x : samples) {
    const auto c = local_coefficients(hs, x);
    bmin = std::min(bmin, c.b);
    bmax = std::max(bmax, c.b);
    if (!std::isfinite(c.potential)) potential_finite = false;
    if (!std::isfinite(problem.boundary.exit_cost(x))) psi_finite = false;
  }
  if (hs.variant == HamiltonianSpec::Variant::model) {
    if (!(bmin > 0.0) || !std::isfinite(bmax)) {
      out.push_back("coefficient b must stay within (delta, 1/delta)");
      report.delta = 0.0;
    } else {
      report.delta = std::min(bmin, 1.0 / bmax);
    }
  } else {
    report.delta = 1.0;
  }
  if (!potential_finite) out.push_back("potential V must be finite on the domain");
  if (!psi_finite) out.push_back("exit cost psi must be finite on the domain");

  const double beta = hs.growth();
  if (out.empty()) {
    std::uniform_int_distribution<std::size_t> pick(0, samples.size() - 1);
    std::normal_distribution<double> gauss(0.0, 3.0);
    bool convex = true;
    for (int k = 0; k < kConvexityPairs; ++k) {
      const Point x = samples[pick(rng)];
      const Vec p{gauss(rng), dom.dim == 2 ? gauss(rng) : 0.0};
      const Vec q{gauss(rng), dom.dim == 2 ? gauss(rng) : 0.0};
      const Vec mid{0.5 * (p[0] + q[0]), 0.5 * (p[1] + q[1])};
      if (!midpoint_convex(hamiltonian_H(hs, x, p), hamiltonian_H(hs, x, q),
                           hamiltonian_H(hs, x, mid))) {
        convex = false;
      }
    }
    if (!convex) out.push_back("H(x, .) fails midpoint convexity");

    // Fit C in -H + D_pH p >= |p|^beta / C - C.
    std::vector<std::pair<double, double>> lp;  // (lagrangian, |p|^beta)
    for (int k = 0; k < kLagrangianSamples; ++k) {
      const Point x = samples[pick(rng)];
      const double r = std::pow(10.0, -2.0 + 5.0 * unit(rng));
      const double th = 2.0 * 3.141592653589793 * unit(rng);
      const Vec p = dom.dim == 2 ? Vec{r * std::cos(th), r * std::sin(th)}
                                 : Vec{unit(rng) < 0.5 ? -r : r, 0.0};
      const auto c = local_coefficients(hs, x);
      const Vec dp = hamiltonian_gradient(hs, c, p);
      const double lag =
          -hamiltonian_value(hs, c, p) + dp[0] * p[0] + dp[1] * p[1];
      lp.emplace_back(lag, std::pow(r, beta));
    }
    auto holds = [&](double cst) {
      for (const auto& [lag, pb] : lp) {
        if (lag < pb / cst - cst) return false;
      }
      return true;
    };
    if (!holds(1e6)) {
      report.lagrangian_constant = std::numeric_limits<double>::quiet_NaN();
      out.push_back("lower bound -H + D_pH p >= |p|^beta/C - C fails");
    } else {
      double lo = 1e-6;
      double hi = 1e6;
      if (holds(lo)) {
        hi = lo;
      }
      for (int it = 0; it < 200 && hi / lo > 1.0 + 1e-9; ++it) {
        const double mid = std::sqrt(lo * hi);
        if (holds(mid)) hi = mid; else lo = mid;
      }
      report.lagrangian_constant = hi;
    }
  }

  // Boundary data.
  bool has_neumann = false;
  bool has_dirichlet = false;
  bool j_negative = false;
  bool j_finite = true;
  for (Face f : domain_faces(dom.dim)) {
    const auto kind = problem.boundary.kind(f);
    if (!kind) {
      out.push_back("boundary face '" + to_string(f) + "' is not labeled");
      continue;
    }
    if (*kind == BoundaryKind::dirichlet) {
      has_dirichlet = true;
      continue;
    }
    has_neumann = true;
    for (const auto& x : face_samples(dom, f)) {
      const double j = problem.boundary.influx(x);
      if (!std::isfinite(j)) j_finite = false;
      if (j < 0.0) j_negative = true;
    }
  }
  if (j_negative) out.push_back("j negative on Gamma_N");
  if (!j_finite) out.push_back("j must be finite on Gamma_N");
  if (!has_dirichlet) out.push_back("Dirichlet boundary Gamma_D is empty");
  if (!has_neumann) out.push_back("Neumann boundary Gamma_N is empty");
  return report;
}

}  // namespace mfg
