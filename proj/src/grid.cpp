#include "mfg/grid.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace mfg {

Grid::Grid(int dim, Point lo, Point hi, std::array<int, 2> cells)
    : dim_(dim), lo_(lo), hi_(hi), cells_(cells), h_{0.0, 0.0} {
  if (dim != 1 && dim != 2) {
    throw std::invalid_argument("grid: dimension must be 1 or 2");
  }
  for (int k = 0; k < dim; ++k) {
    if (!(hi[k] > lo[k]) || !std::isfinite(lo[k]) || !std::isfinite(hi[k])) {
      throw std::invalid_argument("grid: extents must be finite and ordered");
    }
    if (cells[k] < 2) {
      throw std::invalid_argument("grid: at least two cells per axis");
    }
    h_[k] = (hi[k] - lo[k]) / cells[k];
  }
  if (dim == 1) {
    lo_[1] = hi_[1] = 0.0;
    cells_[1] = 1;
  }
}

std::size_t Grid::node_count() const {
  return static_cast<std::size_t>(nodes(0)) * static_cast<std::size_t>(nodes(1));
}

std::size_t Grid::cell_count() const {
  return dim_ == 1 ? static_cast<std::size_t>(cells_[0])
                   : static_cast<std::size_t>(cells_[0]) *
                         static_cast<std::size_t>(cells_[1]);
}

Point Grid::node_point(std::size_t node) const {
  const auto nx = static_cast<std::size_t>(nodes(0));
  const auto i = static_cast<double>(node % nx);
  const auto j = static_cast<double>(node / nx);
  if (dim_ == 1) return {lo_[0] + i * h_[0], 0.0};
  return {lo_[0] + i * h_[0], lo_[1] + j * h_[1]};
}

Point Grid::cell_center(std::size_t cell) const {
  const auto cx = static_cast<std::size_t>(cells_[0]);
  const auto i = static_cast<double>(cell % cx);
  const auto j = static_cast<double>(cell / cx);
  if (dim_ == 1) return {lo_[0] + (i + 0.5) * h_[0], 0.0};
  return {lo_[0] + (i + 0.5) * h_[0], lo_[1] + (j + 0.5) * h_[1]};
}

double Grid::cell_volume() const {
  return dim_ == 1 ? h_[0] : h_[0] * h_[1];
}

std::array<std::size_t, 4> Grid::cell_nodes(std::size_t cell) const {
  if (dim_ == 1) return {cell, cell + 1, 0, 0};
  const auto cx = static_cast<std::size_t>(cells_[0]);
  const auto nx = cx + 1;
  const std::size_t i = cell % cx;
  const std::size_t j = cell / cx;
  const std::size_t a = j * nx + i;
  return {a, a + 1, a + nx, a + nx + 1};
}

bool Grid::is_boundary_node(std::size_t node) const {
  const auto nx = static_cast<std::size_t>(nodes(0));
  const std::size_t i = node % nx;
  if (i == 0 || i + 1 == nx) return true;
  if (dim_ == 1) return false;
  const std::size_t j = node / nx;
  return j == 0 || j + 1 == static_cast<std::size_t>(nodes(1));
}

Grid build_grid(double lo, double hi, int cells) {
  return Grid(1, {lo, 0.0}, {hi, 0.0}, {cells, 1});
}

Grid build_grid(Point lo, Point hi, std::array<int, 2> cells) {
  return Grid(2, lo, hi, cells);
}

Grid build_grid(const Domain& domain, std::array<int, 2> cells) {
  return Grid(domain.dim, domain.lo, domain.hi, cells);
}

// ---------------------------------------------------------------------------

namespace {

void require_finite(const std::vector<double>& v, const char* what) {
  for (double x : v) {
    if (!std::isfinite(x)) {
      throw std::invalid_argument(std::string(what) + ": non-finite value");
    }
  }
}

}  // namespace

Field::Field(Grid g, double fill)
    : grid(std::move(g)), values(grid.node_count(), fill) {}

Field::Field(Grid g, std::vector<double> v)
    : grid(std::move(g)), values(std::move(v)) {
  if (values.size() != grid.node_count()) {
    throw std::invalid_argument("field: value count does not match node count");
  }
  require_finite(values, "field");
}

CellField::CellField(Grid g, double fill)
    : grid(std::move(g)), values(grid.cell_count(), fill) {}

CellField::CellField(Grid g, std::vector<double> v)
    : grid(std::move(g)), values(std::move(v)) {
  if (values.size() != grid.cell_count()) {
    throw std::invalid_argument(
        "cell field: value count does not match cell count");
  }
  require_finite(values, "cell field");
}

CellVectorField::CellVectorField(Grid g)
    : grid(std::move(g)), values(grid.cell_count(), Vec{0.0, 0.0}) {}

CellVectorField::CellVectorField(Grid g, std::vector<Vec> v)
    : grid(std::move(g)), values(std::move(v)) {
  if (values.size() != grid.cell_count()) {
    throw std::invalid_argument(
        "cell vector field: value count does not match cell count");
  }
}

Field sample_nodes(const Grid& grid, const Expr& f) {
  std::vector<double> v(grid.node_count());
  for (std::size_t k = 0; k < v.size(); ++k) v[k] = f(grid.node_point(k));
  return Field(grid, std::move(v));
}

CellField sample_cells(const Grid& grid, const Expr& f) {
  std::vector<double> v(grid.cell_count());
  for (std::size_t c = 0; c < v.size(); ++c) v[c] = f(grid.cell_center(c));
  return CellField(grid, std::move(v));
}

// ---------------------------------------------------------------------------

void cell_gradient(const Grid& grid, std::span<const double> w,
                   std::span<Vec> out) {
  const std::size_t cells = grid.cell_count();
  if (grid.dim() == 1) {
    const double inv = 1.0 / grid.spacing(0);
    for (std::size_t c = 0; c < cells; ++c) {
      out[c] = {(w[c + 1] - w[c]) * inv, 0.0};
    }
    return;
  }
  const double ax = 0.5 / grid.spacing(0);
  const double ay = 0.5 / grid.spacing(1);
  for (std::size_t c = 0; c < cells; ++c) {
    const auto n = grid.cell_nodes(c);
    const double w00 = w[n[0]], w10 = w[n[1]], w01 = w[n[2]], w11 = w[n[3]];
    out[c] = {ax * ((w10 - w00) + (w11 - w01)),
              ay * ((w01 - w00) + (w11 - w10))};
  }
}

CellVectorField cell_gradient(const Field& w) {
  CellVectorField out(w.grid);
  cell_gradient(w.grid, w.values, out.values);
  return out;
}

void flux_pairing(const Grid& grid, std::span<const Vec> flux,
                  std::span<double> out) {
  std::fill(out.begin(), out.end(), 0.0);
  const std::size_t cells = grid.cell_count();
  const double vol = grid.cell_volume();
  if (grid.dim() == 1) {
    const double s = vol / grid.spacing(0);
    for (std::size_t c = 0; c < cells; ++c) {
      const double f = s * flux[c][0];
      out[c] -= f;
      out[c + 1] += f;
    }
    return;
  }
  const double ax = vol * 0.5 / grid.spacing(0);
  const double ay = vol * 0.5 / grid.spacing(1);
  for (std::size_t c = 0; c < cells; ++c) {
    const auto n = grid.cell_nodes(c);
    const double fx = ax * flux[c][0];
    const double fy = ay * flux[c][1];
    out[n[0]] += -fx - fy;
    out[n[1]] += fx - fy;
    out[n[2]] += -fx + fy;
    out[n[3]] += fx + fy;
  }
}

Field flux_pairing(const CellVectorField& flux) {
  Field out(flux.grid);
  flux_pairing(flux.grid, flux.values, out.values);
  return out;
}

double compensated_sum(std::span<const double> terms) {
  double sum = 0.0;
  double comp = 0.0;
  for (double t : terms) {
    const double s = sum + t;
    if (std::abs(sum) >= std::abs(t)) {
      comp += (sum - s) + t;
    } else {
      comp += (t - s) + sum;
    }
    sum = s;
  }
  return sum + comp;
}

double interior_integral(const CellField& f) {
  return compensated_sum(f.values) * f.grid.cell_volume();
}

Field dual_volume(const Grid& grid) {
  Field out(grid);
  const double share = grid.cell_volume() / (grid.dim() == 1 ? 2.0 : 4.0);
  const int per_cell = grid.dim() == 1 ? 2 : 4;
  for (std::size_t c = 0; c < grid.cell_count(); ++c) {
    const auto n = grid.cell_nodes(c);
    for (int k = 0; k < per_cell; ++k) out[n[k]] += share;
  }
  return out;
}

// ---------------------------------------------------------------------------

namespace {

Vec face_normal(Face f) {
  switch (f) {
    case Face::left: return {-1.0, 0.0};
    case Face::right: return {1.0, 0.0};
    case Face::bottom: return {0.0, -1.0};
    case Face::top: return {0.0, 1.0};
  }
  return {0.0, 0.0};
}

// Nodes on a face with their trapezoid weights.
std::vector<std::pair<std::size_t, double>> face_nodes(const Grid& g, Face f) {
  std::vector<std::pair<std::size_t, double>> out;
  if (g.dim() == 1) {
    out.emplace_back(f == Face::left ? 0 : g.node_count() - 1, 1.0);
    return out;
  }
  const int nx = g.nodes(0);
  const int ny = g.nodes(1);
  const bool vertical = f == Face::left || f == Face::right;
  const int count = vertical ? ny : nx;
  const double h = vertical ? g.spacing(1) : g.spacing(0);
  for (int k = 0; k < count; ++k) {
    const double w = (k == 0 || k == count - 1) ? 0.5 * h : h;
    std::size_t node = 0;
    switch (f) {
      case Face::left: node = g.node_index(0, k); break;
      case Face::right: node = g.node_index(nx - 1, k); break;
      case Face::bottom: node = g.node_index(k, 0); break;
      case Face::top: node = g.node_index(k, ny - 1); break;
    }
    out.emplace_back(node, w);
  }
  return out;
}

}  // namespace

BoundaryClass classify_boundary(const Grid& grid, const BoundarySpec& spec) {
  const std::size_t n = grid.node_count();
  BoundaryClass bc;
  bc.label.assign(n, BoundaryClass::Label::interior);
  bc.normal.assign(n, Vec{0.0, 0.0});
  bc.weight.assign(n, 0.0);
  bc.neumann_weight.assign(n, 0.0);
  bc.dirichlet_weight.assign(n, 0.0);

  bool any_neumann = false;
  bool any_dirichlet = false;
  for (Face f : domain_faces(grid.dim())) {
    const auto kind = spec.kind(f);
    if (!kind) {
      throw std::invalid_argument("boundary face '" + to_string(f) +
                                  "' is not labeled");
    }
    const bool dirichlet = *kind == BoundaryKind::dirichlet;
    (dirichlet ? any_dirichlet : any_neumann) = true;
    const Vec nu = face_normal(f);
    for (const auto& [node, w] : face_nodes(grid, f)) {
      auto& lab = bc.label[node];
      if (dirichlet) {
        lab = BoundaryClass::Label::dirichlet;
        bc.dirichlet_weight[node] += w;
      } else {
        if (lab != BoundaryClass::Label::dirichlet) {
          lab = BoundaryClass::Label::neumann;
        }
        bc.neumann_weight[node] += w;
      }
      bc.weight[node] += w;
      bc.normal[node][0] += nu[0];
      bc.normal[node][1] += nu[1];
    }
  }
  if (!any_neumann) {
    throw std::invalid_argument("boundary partition: Gamma_N is empty");
  }
  if (!any_dirichlet) {
    throw std::invalid_argument("boundary partition: Gamma_D is empty");
  }
  for (std::size_t k = 0; k < n; ++k) {
    if (bc.label[k] == BoundaryClass::Label::interior) continue;
    bc.boundary_nodes.push_back(k);
    auto& nu = bc.normal[k];
    const double len = std::hypot(nu[0], nu[1]);
    nu = {nu[0] / len, nu[1] / len};
  }
  return bc;
}

double boundary_integral(const Field& f, const BoundaryClass& bc,
                         BoundaryKind kind) {
  const auto& w = kind == BoundaryKind::neumann ? bc.neumann_weight
                                                : bc.dirichlet_weight;
  std::vector<double> terms;
  terms.reserve(bc.boundary_nodes.size());
  for (std::size_t node : bc.boundary_nodes) {
    if (w[node] != 0.0) terms.push_back(w[node] * f[node]);
  }
  return compensated_sum(terms);
}

}  // namespace mfg
