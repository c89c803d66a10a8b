#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "mfg/grid.hpp"
#include "support.hpp"

using namespace mfg;

namespace {

BoundarySpec square_layout() {
  BoundarySpec b;
  b.set(Face::left, BoundaryKind::neumann)
      .set(Face::top, BoundaryKind::neumann)
      .set(Face::right, BoundaryKind::dirichlet)
      .set(Face::bottom, BoundaryKind::dirichlet);
  return b;
}

BoundarySpec interval_layout() {
  BoundarySpec b;
  b.set(Face::left, BoundaryKind::neumann)
      .set(Face::right, BoundaryKind::dirichlet);
  return b;
}

}  // namespace

TEST_CASE("build_grid") {
  const Grid g = build_grid(0.0, 1.0, 4);
  CHECK(g.spacing(0) == doctest::Approx(0.25));
  CHECK(g.node_count() == 5);
  CHECK(g.cell_count() == 4);

  const Grid s = build_grid(Point{0.0, 0.0}, Point{1.0, 1.0}, {2, 2});
  CHECK(s.node_count() == 9);
  CHECK(s.cell_count() == 4);
  CHECK(s.cell_volume() == doctest::Approx(0.25));

  CHECK_THROWS_AS(build_grid(1.0, 0.0, 4), std::invalid_argument);
  CHECK_THROWS_AS(build_grid(0.0, 1.0, 1), std::invalid_argument);
  CHECK_THROWS_AS(build_grid(Point{0.0, 1.0}, Point{1.0, 1.0}, {2, 2}),
                  std::invalid_argument);
}

TEST_CASE("node and cell geometry") {
  const Grid g = build_grid(Point{-1.0, 0.0}, Point{1.0, 3.0}, {4, 3});
  CHECK(g.nodes(0) == 5);
  CHECK(g.nodes(1) == 4);
  const Point p = g.node_point(g.node_index(2, 1));
  CHECK(p[0] == doctest::Approx(0.0));
  CHECK(p[1] == doctest::Approx(1.0));
  const Point c = g.cell_center(g.cell_index(3, 2));
  CHECK(c[0] == doctest::Approx(0.75));
  CHECK(c[1] == doctest::Approx(2.5));
  const auto n = g.cell_nodes(g.cell_index(1, 1));
  CHECK(n[0] == g.node_index(1, 1));
  CHECK(n[1] == g.node_index(2, 1));
  CHECK(n[2] == g.node_index(1, 2));
  CHECK(n[3] == g.node_index(2, 2));
  CHECK(g.is_boundary_node(g.node_index(0, 2)));
  CHECK_FALSE(g.is_boundary_node(g.node_index(2, 2)));
}

TEST_CASE("fields reject mismatched or non-finite data") {
  const Grid g = build_grid(0.0, 1.0, 4);
  CHECK_THROWS_AS(Field(g, std::vector<double>(4, 0.0)), std::invalid_argument);
  CHECK_THROWS_AS(CellField(g, std::vector<double>(5, 0.0)),
                  std::invalid_argument);
  CHECK_THROWS_AS(Field(g, std::vector<double>(5, std::nan(""))),
                  std::invalid_argument);
}

TEST_CASE("cell_gradient of simple fields") {
  const Grid g = build_grid(0.0, 1.0, 4);
  const Field lin(g, {0.0, 0.25, 0.5, 0.75, 1.0});
  for (const Vec& d : cell_gradient(lin).values) CHECK(d[0] == doctest::Approx(1.0));

  const Field flat(g, 2.5);
  for (const Vec& d : cell_gradient(flat).values) CHECK(d[0] == 0.0);

  const Grid s = build_grid(Point{0.0, 0.0}, Point{1.0, 1.0}, {2, 2});
  const Field x = sample_nodes(s, Expr::linear(0.0, 1.0, 0.0));
  for (const Vec& d : cell_gradient(x).values) {
    CHECK(d[0] == doctest::Approx(1.0));
    CHECK(d[1] == doctest::Approx(0.0).scale(1.0));
  }
}

TEST_CASE("cell_gradient is exact on affine fields") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (int trial = 0; trial < 20; ++trial) {
    const double c0 = u(rng), cx = u(rng), cy = u(rng);
    const Grid s = build_grid(Point{u(rng) - 4.0, u(rng) - 4.0},
                              Point{u(rng) + 4.0, u(rng) + 4.0},
                              {3 + trial % 5, 2 + trial % 7});
    const Field w = sample_nodes(s, Expr::linear(c0, cx, cy));
    for (const Vec& d : cell_gradient(w).values) {
      CHECK(d[0] == doctest::Approx(cx).epsilon(1e-12).scale(1.0));
      CHECK(d[1] == doctest::Approx(cy).epsilon(1e-12).scale(1.0));
    }
    const Grid l = build_grid(u(rng) - 4.0, u(rng) + 4.0, 3 + trial);
    const Field wl = sample_nodes(l, Expr::linear(c0, cx));
    for (const Vec& d : cell_gradient(wl).values) {
      CHECK(d[0] == doctest::Approx(cx).epsilon(1e-12).scale(1.0));
    }
  }
}

TEST_CASE("2D cell gradient is the bilinear-interpolant gradient at the centroid") {
  const Grid s = build_grid(Point{0.0, 0.0}, Point{2.0, 1.0}, {5, 4});
  const Field w = testing::smooth_field(s, 17);
  const CellVectorField d = cell_gradient(w);
  const double hx = s.spacing(0);
  const double hy = s.spacing(1);
  for (std::size_t c = 0; c < s.cell_count(); ++c) {
    const auto n = s.cell_nodes(c);
    const double a = w[n[0]], b = w[n[1]], e = w[n[2]], f = w[n[3]];
    CHECK(d[c][0] == doctest::Approx((b - a + f - e) / (2 * hx)));
    CHECK(d[c][1] == doctest::Approx((e - a + f - b) / (2 * hy)));
  }
}

TEST_CASE("flux_pairing is the adjoint of cell_gradient") {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int dim = 1; dim <= 2; ++dim) {
    const Grid g = dim == 1 ? build_grid(0.0, 2.0, 7)
                            : build_grid(Point{0.0, -1.0}, Point{1.0, 1.0}, {5, 6});
    std::vector<double> w(g.node_count());
    for (double& v : w) v = u(rng);
    std::vector<Vec> F(g.cell_count());
    for (Vec& v : F) v = {u(rng), dim == 2 ? u(rng) : 0.0};
    const CellVectorField dw = cell_gradient(Field(g, w));
    const Field r = flux_pairing(CellVectorField(g, F));
    double lhs = 0.0;
    for (std::size_t c = 0; c < g.cell_count(); ++c) {
      lhs += g.cell_volume() * (dw[c][0] * F[c][0] + dw[c][1] * F[c][1]);
    }
    double rhs = 0.0;
    for (std::size_t k = 0; k < w.size(); ++k) rhs += w[k] * r[k];
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
  }
}

TEST_CASE("interior_integral") {
  const Grid g = build_grid(0.0, 1.0, 4);
  CHECK(interior_integral(CellField(g, 1.0)) == doctest::Approx(1.0));
  const Grid s = build_grid(Point{0.0, 0.0}, Point{1.0, 1.0}, {3, 5});
  CHECK(interior_integral(CellField(s, 2.0)) == doctest::Approx(2.0));
  CHECK(interior_integral(sample_cells(g, Expr::linear(0.0, 1.0))) ==
        doctest::Approx(0.5));
}

TEST_CASE("interior_integral is linear and monotone") {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const Grid s = build_grid(Point{0.0, 0.0}, Point{1.0, 2.0}, {6, 4});
  for (int t = 0; t < 50; ++t) {
    std::vector<double> a(s.cell_count()), b(s.cell_count());
    for (std::size_t c = 0; c < a.size(); ++c) {
      a[c] = u(rng);
      b[c] = a[c] + std::abs(u(rng));
    }
    const double ia = interior_integral(CellField(s, a));
    const double ib = interior_integral(CellField(s, b));
    CHECK(ia <= ib);
    const double k = u(rng);
    std::vector<double> mix(a.size());
    for (std::size_t c = 0; c < a.size(); ++c) mix[c] = a[c] + k * b[c];
    CHECK(interior_integral(CellField(s, mix)) ==
          doctest::Approx(ia + k * ib).scale(1.0));
  }
}

TEST_CASE("interior_integral converges at second order") {
  // int_0^1 int_0^1 sin(pi x) e^y = (2 / pi)(e - 1)
  const Expr f = Expr::product(
      {Expr::sine(1.0, 0.5), Expr::polynomial({1.0, 1.0, 0.5, 1.0 / 6.0, 1.0 / 24.0,
                                               1.0 / 120.0, 1.0 / 720.0,
                                               1.0 / 5040.0, 1.0 / 40320.0,
                                               1.0 / 362880.0},
                                              Axis::y)});
  const double exact = 2.0 / std::numbers::pi * (std::numbers::e - 1.0);
  double prev = 0.0;
  for (int n : {8, 16, 32}) {
    const Grid s = build_grid(Point{0.0, 0.0}, Point{1.0, 1.0}, {n, n});
    const double err = std::abs(interior_integral(sample_cells(s, f)) - exact);
    if (prev > 0.0) CHECK(std::log2(prev / err) > 1.9);
    prev = err;
  }
}

TEST_CASE("dual volumes sum to the domain measure") {
  const Grid s = build_grid(Point{0.0, 0.0}, Point{2.0, 3.0}, {4, 6});
  const Field v = dual_volume(s);
  CHECK(compensated_sum(v.values) == doctest::Approx(6.0));
  CHECK(v[s.node_index(0, 0)] == doctest::Approx(0.25 * s.cell_volume()));
  CHECK(v[s.node_index(2, 3)] == doctest::Approx(s.cell_volume()));
}

TEST_CASE("classify_boundary in 1D") {
  const Grid g = build_grid(0.0, 1.0, 10);
  const BoundaryClass bc = classify_boundary(g, interval_layout());
  CHECK(bc.is(0, BoundaryClass::Label::neumann));
  CHECK(bc.is(10, BoundaryClass::Label::dirichlet));
  CHECK(bc.is(5, BoundaryClass::Label::interior));
  CHECK(bc.normal[0][0] == -1.0);
  CHECK(bc.normal[10][0] == 1.0);
  CHECK(bc.weight[0] == 1.0);
  CHECK(bc.boundary_nodes == std::vector<std::size_t>{0, 10});
}

TEST_CASE("classify_boundary in 2D") {
  const Grid s = build_grid(Point{0.0, 0.0}, Point{1.0, 1.0}, {4, 4});
  const BoundaryClass bc = classify_boundary(s, square_layout());
  using L = BoundaryClass::Label;
  CHECK(bc.is(s.node_index(4, 4), L::dirichlet));  // top-right corner
  CHECK(bc.is(s.node_index(0, 0), L::dirichlet));  // bottom-left corner
  CHECK(bc.is(s.node_index(0, 4), L::neumann));    // left meets top
  CHECK(bc.is(s.node_index(0, 2), L::neumann));
  CHECK(bc.is(s.node_index(2, 4), L::neumann));
  CHECK(bc.is(s.node_index(4, 2), L::dirichlet));
  CHECK(bc.is(s.node_index(2, 0), L::dirichlet));
  CHECK(bc.is(s.node_index(2, 2), L::interior));
  const Vec nu = bc.normal[s.node_index(4, 4)];
  CHECK(nu[0] == doctest::Approx(std::sqrt(0.5)));
  CHECK(nu[1] == doctest::Approx(std::sqrt(0.5)));
  // the corner keeps the Neumann share of its weight
  CHECK(bc.neumann_weight[s.node_index(4, 4)] == doctest::Approx(0.125));
  CHECK(bc.dirichlet_weight[s.node_index(4, 4)] == doctest::Approx(0.125));
}

TEST_CASE("classify_boundary rejects incomplete partitions") {
  const Grid s = build_grid(Point{0.0, 0.0}, Point{1.0, 1.0}, {4, 4});
  BoundarySpec all_d;
  for (Face f : domain_faces(2)) all_d.set(f, BoundaryKind::dirichlet);
  CHECK_THROWS_AS(classify_boundary(s, all_d), std::invalid_argument);
  BoundarySpec all_n;
  for (Face f : domain_faces(2)) all_n.set(f, BoundaryKind::neumann);
  CHECK_THROWS_AS(classify_boundary(s, all_n), std::invalid_argument);
  BoundarySpec missing = square_layout();
  missing.faces[static_cast<std::size_t>(Face::top)].reset();
  CHECK_THROWS_AS(classify_boundary(s, missing), std::invalid_argument);
}

TEST_CASE("boundary_integral") {
  const Grid g = build_grid(0.0, 1.0, 8);
  const BoundaryClass bc = classify_boundary(g, interval_layout());
  Field f(g);
  f[0] = 3.0;
  CHECK(boundary_integral(f, bc, BoundaryKind::neumann) == doctest::Approx(3.0));

  const Grid s = build_grid(Point{0.0, 0.0}, Point{1.0, 1.0}, {8, 8});
  BoundarySpec left_only;
  left_only.set(Face::left, BoundaryKind::neumann)
      .set(Face::top, BoundaryKind::dirichlet)
      .set(Face::right, BoundaryKind::dirichlet)
      .set(Face::bottom, BoundaryKind::dirichlet);
  const BoundaryClass bs = classify_boundary(s, left_only);
  CHECK(boundary_integral(Field(s, 1.0), bs, BoundaryKind::neumann) ==
        doctest::Approx(1.0));
  CHECK(boundary_integral(sample_nodes(s, Expr::linear(0.0, 0.0, 1.0)), bs,
                          BoundaryKind::neumann) == doctest::Approx(0.5));
  CHECK(boundary_integral(Field(s, 1.0), bs, BoundaryKind::dirichlet) ==
        doctest::Approx(3.0));
}

TEST_CASE("compensated_sum recovers cancelled terms") {
  const std::vector<double> t{1e16, 1.0, -1e16, 1.0};
  CHECK(compensated_sum(t) == 2.0);
}
