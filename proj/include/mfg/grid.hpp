#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include "mfg/expr.hpp"
#include "mfg/model.hpp"

namespace mfg {

/// Uniform tensor grid on an interval or an axis-aligned rectangle.
class Grid {
 public:
  /// Throws std::invalid_argument for unordered extents or fewer than two
  /// cells per axis.
  Grid(int dim, Point lo, Point hi, std::array<int, 2> cells);

  int dim() const { return dim_; }
  Point lo() const { return lo_; }
  Point hi() const { return hi_; }
  int cells(int axis) const { return cells_[axis]; }
  double spacing(int axis) const { return h_[axis]; }

  /// Nodes per axis (cells + 1; 1 along an absent axis).
  int nodes(int axis) const { return axis < dim_ ? cells_[axis] + 1 : 1; }
  std::size_t node_count() const;
  std::size_t cell_count() const;

  std::size_t node_index(int i, int j = 0) const {
    return static_cast<std::size_t>(j) * static_cast<std::size_t>(nodes(0)) +
           static_cast<std::size_t>(i);
  }
  std::size_t cell_index(int i, int j = 0) const {
    return static_cast<std::size_t>(j) * static_cast<std::size_t>(cells_[0]) +
           static_cast<std::size_t>(i);
  }

  Point node_point(std::size_t node) const;
  Point cell_center(std::size_t cell) const;
  double cell_volume() const;

  /// Node indices of a cell: 1D {left, right}; 2D {(i,j), (i+1,j), (i,j+1),
  /// (i+1,j+1)}. Unused entries of the 1D case are zero.
  std::array<std::size_t, 4> cell_nodes(std::size_t cell) const;

  bool is_boundary_node(std::size_t node) const;

  bool operator==(const Grid&) const = default;

 private:
  int dim_;
  Point lo_;
  Point hi_;
  std::array<int, 2> cells_;
  std::array<double, 2> h_;
};

Grid build_grid(double lo, double hi, int cells);
Grid build_grid(Point lo, Point hi, std::array<int, 2> cells);
Grid build_grid(const Domain& domain, std::array<int, 2> cells);

/// One scalar per grid node.
struct Field {
  Grid grid;
  std::vector<double> values;

  explicit Field(Grid g, double fill = 0.0);
  Field(Grid g, std::vector<double> v);

  std::size_t size() const { return values.size(); }
  double& operator[](std::size_t k) { return values[k]; }
  double operator[](std::size_t k) const { return values[k]; }
};

/// One scalar per cell.
struct CellField {
  Grid grid;
  std::vector<double> values;

  explicit CellField(Grid g, double fill = 0.0);
  CellField(Grid g, std::vector<double> v);

  std::size_t size() const { return values.size(); }
  double& operator[](std::size_t k) { return values[k]; }
  double operator[](std::size_t k) const { return values[k]; }
};

/// One d-vector per cell (the unused component is zero in 1D).
struct CellVectorField {
  Grid grid;
  std::vector<Vec> values;

  explicit CellVectorField(Grid g);
  CellVectorField(Grid g, std::vector<Vec> v);

  std::size_t size() const { return values.size(); }
  Vec& operator[](std::size_t k) { return values[k]; }
  const Vec& operator[](std::size_t k) const { return values[k]; }
};

Field sample_nodes(const Grid& grid, const Expr& f);
CellField sample_cells(const Grid& grid, const Expr& f);

/// Gradient per cell: forward difference in 1D, gradient of the bilinear
/// interpolant at the cell centroid in 2D.
CellVectorField cell_gradient(const Field& w);
void cell_gradient(const Grid& grid, std::span<const double> w,
                   std::span<Vec> out);

/// Adjoint of `cell_gradient` under the cell-volume inner product:
/// r_i = sum_c |c| F_c . d(Dw_c)/dw_i, i.e. the one-point quadrature of
/// the weak pairing of F with the hat function of node i.
Field flux_pairing(const CellVectorField& flux);
void flux_pairing(const Grid& grid, std::span<const Vec> flux,
                  std::span<double> out);

/// Centroid quadrature of a cell field.
double interior_integral(const CellField& f);

/// Integral of the hat function of each node (lumped mass).
Field dual_volume(const Grid& grid);

/// Per-node boundary data.
struct BoundaryClass {
  enum class Label : signed char { interior = 0, neumann = 1, dirichlet = 2 };

  std::vector<Label> label;               // per node
  std::vector<Vec> normal;                // unit outward normal, zero inside
  std::vector<double> weight;             // boundary measure weight
  std::vector<double> neumann_weight;     // part of weight on Neumann faces
  std::vector<double> dirichlet_weight;   // part of weight on Dirichlet faces
  std::vector<std::size_t> boundary_nodes;  // ascending

  bool is(std::size_t node, Label l) const { return label[node] == l; }
};

/// Labels every boundary node. Corners shared by a Dirichlet and a Neumann
/// face are Dirichlet. Throws std::invalid_argument if a face is unlabeled
/// or either part of the partition is empty.
BoundaryClass classify_boundary(const Grid& grid, const BoundarySpec& spec);

/// Sum over faces of the given kind: point evaluation at the endpoints in
/// 1D, trapezoid rule along each face in 2D.
double boundary_integral(const Field& f, const BoundaryClass& bc,
                         BoundaryKind kind);

/// Neumaier-compensated sum in index order.
double compensated_sum(std::span<const double> terms);

}  // namespace mfg
