#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "mfg/model.hpp"
#include "support.hpp"

using namespace mfg;
using testing::bisect;

namespace {

bool has_finding(const ValidationReport& r, const std::string& text) {
  return std::find(r.findings.begin(), r.findings.end(), text) !=
         r.findings.end();
}

CouplingSpec sample_table() {
  // flat G' = 0 up to z = -0.5, then ramps, then a steeper tail
  return CouplingSpec::tabulated({-1.0, -0.5, 0.5, 1.0}, {0.0, 0.0, 1.0, 3.0});
}

}  // namespace

TEST_CASE("coupling G values") {
  const auto power = CouplingSpec::power(1.0, 2.0);
  const auto quad = CouplingSpec::quadratic_positive_part();
  CHECK(coupling_G(power, 0.0) == doctest::Approx(1.0));
  CHECK(coupling_G(power, -2.0) == 0.0);
  CHECK(coupling_G(quad, -3.0) == 0.0);
  CHECK(coupling_G(quad, 2.0) == doctest::Approx(2.0));
}

TEST_CASE("coupling G' values") {
  const auto power = CouplingSpec::power(1.0, 2.0);
  const auto quad = CouplingSpec::quadratic_positive_part();
  CHECK(coupling_Gprime(power, 1.0) == doctest::Approx(4.0));
  CHECK(coupling_Gprime(quad, 3.0) == doctest::Approx(3.0));
  CHECK(coupling_Gprime(power, -1.5) == 0.0);
}

TEST_CASE("pseudo-inverse g") {
  const auto power = CouplingSpec::power(1.0, 2.0);
  const auto quad = CouplingSpec::quadratic_positive_part();
  CHECK(coupling_g(quad, 0.0) == 0.0);
  CHECK(coupling_g(quad, 5.0) == doctest::Approx(5.0));

  // bisection on G'(z) = 4 over [-1, 10]
  const double ref =
      bisect([&](double z) { return coupling_Gprime(power, z) - 4.0; }, -1.0,
             10.0);
  CHECK(ref == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(coupling_g(power, 4.0) == doctest::Approx(ref).epsilon(1e-12));

  // max convention on the flat piece
  CHECK(coupling_g(power, 0.0) == -1.0);
  CHECK(coupling_g(sample_table(), 0.0) == doctest::Approx(-0.5));

  CHECK_THROWS_AS(coupling_g(quad, -1.0), std::domain_error);
  CHECK_THROWS_AS(coupling_g(quad, std::nan("")), std::domain_error);
  CHECK_THROWS_AS(coupling_g(CouplingSpec::tabulated({0.0, 1.0}, {1.0, 1.0}),
                             2.0),
                  std::domain_error);
}

TEST_CASE("tabulated coupling integrates its slope table") {
  const auto t = sample_table();
  CHECK(coupling_G(t, -1.0) == 0.0);
  CHECK(coupling_G(t, -0.5) == 0.0);
  // ramp from 0 to 1 over [-0.5, 0.5] has area 0.5
  CHECK(coupling_G(t, 0.5) == doctest::Approx(0.5));
  // trapezoid (1 + 3) / 2 * 0.5 = 1
  CHECK(coupling_G(t, 1.0) == doctest::Approx(1.5));
  // tail slope 4: G'(1.5) = 5, area (3 + 5) / 2 * 0.5 = 2
  CHECK(coupling_Gprime(t, 1.5) == doctest::Approx(5.0));
  CHECK(coupling_G(t, 1.5) == doctest::Approx(3.5));
  CHECK(coupling_G(t, -3.0) == 0.0);
  CHECK(coupling_flat_end(t).value() == doctest::Approx(-0.5));
  CHECK(coupling_g(t, 2.0) == doctest::Approx(0.75));
  CHECK(coupling_g(t, 5.0) == doctest::Approx(1.5));

  CHECK_THROWS_AS(CouplingSpec::tabulated({0.0}, {1.0}), std::invalid_argument);
  CHECK_THROWS_AS(CouplingSpec::tabulated({0.0, 0.0}, {1.0, 2.0}),
                  std::invalid_argument);
}

TEST_CASE("flat end of G'") {
  CHECK(coupling_flat_end(CouplingSpec::power(2.0, 3.0)).value() == -1.0);
  CHECK(coupling_flat_end(CouplingSpec::quadratic_positive_part()).value() ==
        0.0);
  CHECK_FALSE(
      coupling_flat_end(CouplingSpec::tabulated({0.0, 1.0}, {1.0, 2.0}))
          .has_value());
}

TEST_CASE("coupling_change agrees with the plain difference") {
  const CouplingSpec specs[] = {CouplingSpec::power(1.5, 2.5),
                                CouplingSpec::quadratic_positive_part(),
                                sample_table()};
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> z(-3.0, 3.0);
  for (const auto& s : specs) {
    for (int k = 0; k < 200; ++k) {
      const double a = z(rng);
      const double d = z(rng);
      const double ref = coupling_G(s, a + d) - coupling_G(s, a);
      CHECK(coupling_change(s, a, d) ==
            doctest::Approx(ref).epsilon(1e-10).scale(1.0));
    }
    CHECK(coupling_change(s, 0.3, 0.0) == 0.0);
  }
  // tiny step: first-order term G'(z) dz dominates and must survive
  const auto q = CouplingSpec::quadratic_positive_part();
  CHECK(coupling_change(q, 1e8, 1e-9) == doctest::Approx(1e-1).epsilon(1e-12));
}

TEST_CASE("Hamiltonian values and gradients") {
  const auto hq0 = HamiltonianSpec::quadratic(Expr::constant(0.0));
  CHECK(hamiltonian_H(hq0, Point{0.3, 0.0}, Vec{0.0, 0.0}) == 0.0);

  const auto hq = HamiltonianSpec::quadratic(Expr::sine(1.0, 0.5));
  CHECK(hamiltonian_H(hq, Point{0.5, 0.0}, Vec{1.0, 0.0}) ==
        doctest::Approx(1.5));

  const auto hm = HamiltonianSpec::model(2.0, Expr::constant(1.0));
  // (4 + 1)^1 - 1 + sin(0)
  CHECK(hamiltonian_H(hm, Point{0.0, 0.0}, Vec{2.0, 0.0}) ==
        doctest::Approx(4.0));

  const Vec g = hamiltonian_DpH(hq, Point{0.2, 0.0}, Vec{3.0, 0.0});
  CHECK(g[0] == 3.0);
  const Vec gm = hamiltonian_DpH(hm, Point{0.2, 0.4}, Vec{1.0, 1.0});
  CHECK(gm[0] == doctest::Approx(2.0));
  CHECK(gm[1] == doctest::Approx(2.0));
  const Vec z = hamiltonian_DpH(hq, Point{0.2, 0.0}, Vec{0.0, 0.0});
  CHECK(z[0] == 0.0);
  CHECK(z[1] == 0.0);
}

TEST_CASE("model Hamiltonian default potential is sin(|x|^2)") {
  const auto hm = HamiltonianSpec::model(2.0, Expr::constant(1.0));
  const Point x{0.6, 0.7};
  CHECK(hamiltonian_H(hm, x, Vec{0.0, 0.0}) ==
        doctest::Approx(std::sin(0.36 + 0.49)));
}

TEST_CASE("DpH matches central differences of H") {
  const auto hs = {HamiltonianSpec::quadratic(Expr::sine(1.0, 1.0)),
                   HamiltonianSpec::model(1.5, Expr::constant(2.0)),
                   HamiltonianSpec::model(3.0, Expr::linear(1.0, 0.5, 0.2))};
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  const double step = 1e-5;
  for (const auto& h : hs) {
    for (int k = 0; k < 100; ++k) {
      const Point x{0.5 + 0.25 * u(rng), 0.5 + 0.25 * u(rng)};
      const Vec p{u(rng), u(rng)};
      const Vec g = hamiltonian_DpH(h, x, p);
      for (int a = 0; a < 2; ++a) {
        Vec up = p;
        Vec dn = p;
        up[a] += step;
        dn[a] -= step;
        const double fd =
            (hamiltonian_H(h, x, up) - hamiltonian_H(h, x, dn)) / (2 * step);
        CHECK(std::abs(fd - g[a]) <= 1e-6 * std::max(1.0, std::abs(fd)));
      }
    }
  }
}

TEST_CASE("hamiltonian_change agrees with the plain difference") {
  const auto hm = HamiltonianSpec::model(2.5, Expr::constant(1.0));
  const auto hq = HamiltonianSpec::quadratic(Expr::constant(-1.0));
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (const auto* h : {&hm, &hq}) {
    const LocalCoefficients c = local_coefficients(*h, Point{0.1, 0.1});
    for (int k = 0; k < 200; ++k) {
      const Vec p{u(rng), u(rng)};
      const Vec d{u(rng), u(rng)};
      const double ref = hamiltonian_value(*h, c, Vec{p[0] + d[0], p[1] + d[1]}) -
                         hamiltonian_value(*h, c, p);
      CHECK(hamiltonian_change(*h, c, p, d) ==
            doctest::Approx(ref).epsilon(1e-10).scale(1.0));
    }
  }
}

TEST_CASE("domain-checked Hamiltonian evaluation") {
  const auto p = testing::interval_problem(Expr::constant(1.0), 0.0);
  CHECK(hamiltonian_H(p, Point{0.5, 0.0}, Vec{1.0, 0.0}) ==
        doctest::Approx(1.5));
  CHECK_THROWS_AS(hamiltonian_H(p, Point{1.5, 0.0}, Vec{1.0, 0.0}),
                  std::domain_error);
  CHECK_THROWS_AS(hamiltonian_DpH(p, Point{-0.1, 0.0}, Vec{1.0, 0.0}),
                  std::domain_error);
}

TEST_CASE("validate_spec on the reference setup") {
  const auto ok = testing::interval_problem(Expr::sine(1.0, 1.0), 1.0);
  const auto r = validate_spec(ok);
  CHECK(r.ok());
  CHECK(r.delta == doctest::Approx(1.0));
}

TEST_CASE("validate_spec findings") {
  auto p = testing::interval_problem(Expr::constant(0.0), -1.0);
  CHECK(has_finding(validate_spec(p), "j negative on Gamma_N"));

  p = testing::interval_problem(Expr::constant(0.0), 1.0);
  p.coupling = CouplingSpec::power(1.0, 0.5);
  CHECK(has_finding(validate_spec(p), "alpha must exceed 1"));
  p.coupling = CouplingSpec::power(1.0, 0.9);
  CHECK(has_finding(validate_spec(p), "alpha must exceed 1"));

  p = testing::interval_problem(Expr::constant(0.0), 1.0);
  p.hamiltonian = HamiltonianSpec::model(1.0, Expr::constant(1.0));
  CHECK(has_finding(validate_spec(p), "beta must exceed 1"));

  p = testing::interval_problem(Expr::constant(0.0), 1.0);
  p.boundary.set(Face::right, BoundaryKind::neumann);
  CHECK(has_finding(validate_spec(p), "Dirichlet boundary Gamma_D is empty"));

  p = testing::interval_problem(Expr::constant(0.0), 1.0);
  p.boundary.set(Face::left, BoundaryKind::dirichlet);
  CHECK(has_finding(validate_spec(p), "Neumann boundary Gamma_N is empty"));

  p = testing::interval_problem(Expr::constant(0.0), 1.0);
  p.boundary.faces[static_cast<std::size_t>(Face::left)].reset();
  CHECK(has_finding(validate_spec(p), "boundary face 'left' is not labeled"));

  p = testing::interval_problem(Expr::constant(0.0), 1.0);
  p.hamiltonian = HamiltonianSpec::model(2.0, Expr::linear(1.0, -2.0));
  CHECK(has_finding(validate_spec(p),
                    "coefficient b must stay within (delta, 1/delta)"));

  p = testing::interval_problem(Expr::constant(0.0), 1.0);
  p.coupling = CouplingSpec::tabulated({0.0, 1.0, 2.0}, {1.0, 0.5, 2.0});
  const auto r = validate_spec(p);
  CHECK_FALSE(r.ok());
}

TEST_CASE("gamma is the product of the exponents") {
  auto p = testing::interval_problem(Expr::constant(0.0), 1.0);
  p.coupling = CouplingSpec::power(1.0, 3.0);
  p.hamiltonian = HamiltonianSpec::model(1.5, Expr::constant(1.0));
  CHECK(p.gamma() == doctest::Approx(4.5));
}

TEST_CASE("string conversions round trip") {
  for (auto v : {CouplingSpec::Variant::power,
                 CouplingSpec::Variant::quadratic_positive_part,
                 CouplingSpec::Variant::tabulated}) {
    CHECK(coupling_variant_from_string(to_string(v)) == v);
  }
  for (Face f : domain_faces(2)) CHECK(face_from_string(to_string(f)) == f);
  CHECK_THROWS_AS(face_from_string("front"), std::invalid_argument);
  CHECK_THROWS_AS(hamiltonian_variant_from_string("cubic"),
                  std::invalid_argument);
}
