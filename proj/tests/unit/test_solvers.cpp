#include <doctest.h>

#include <cmath>

#include "monotone/catalog.hpp"
#include "monotone/error.hpp"
#include "monotone/sampler.hpp"
#include "monotone/solvers.hpp"

using namespace monotone;

namespace {

const double kPi = std::acos(-1.0);

Field from_function(const CartesianGrid& g, int m, double (*fn)(const Point&)) {
  Field f(g, m);
  for (std::size_t i = 0; i < g.node_count(); ++i) {
    for (int c = 0; c < m; ++c) f.at(i, c) = fn(g.node(i));
  }
  return f;
}

double max_error(const Field& a, const Field& b) {
  double e = 0.0;
  for (std::size_t k = 0; k < a.values().size(); ++k) e = std::max(e, std::abs(a.values()[k] - b.values()[k]));
  return e;
}

}  // namespace

TEST_CASE("manufactured homogeneous fields") {
  const auto g = CartesianGrid::cube(3, -1, 1, 9);
  const Field lin = manufactured_homogeneous(1.0, angular_profile("d1"), g);
  const Field quad = manufactured_homogeneous(2.0, angular_profile("d1d2"), g);
  const Field root = manufactured_homogeneous(0.5, angular_profile("one"), g);
  for (std::size_t i = 0; i < g.node_count(); ++i) {
    const Point x = g.node(i);
    CHECK(lin.at(i, 0) == doctest::Approx(x[0]).epsilon(1e-14));
    CHECK(quad.at(i, 0) == doctest::Approx(x[0] * x[1]).epsilon(1e-14));
    CHECK(root.at(i, 0) == doctest::Approx(std::pow(dot(x, x, 3), 0.25)).epsilon(1e-14));
  }
  CHECK(lin.meta().provenance == Provenance::Manufactured);
  CHECK_THROWS(manufactured_homogeneous(-1.0, angular_profile("one"), g));
  CHECK_NOTHROW(manufactured_homogeneous(-1.0, angular_profile("one"), g, {}, 0.1));
}

TEST_CASE("Euler relation on manufactured fields is second order") {
  auto euler_error = [](int count) {
    const auto g = CartesianGrid::cube(2, 0.5, 1.5, count);
    const Field u = manufactured_homogeneous(2.5, angular_profile("d1"), g);
    double e = 0.0;
    for (std::size_t i = 0; i < g.node_count(); ++i) {
      if (g.is_boundary(i)) continue;
      const Point x = g.node(i);
      const double ex = nodal_gradient(u, i, 0, 0) * x[0] + nodal_gradient(u, i, 0, 1) * x[1] - 2.5 * u.at(i, 0);
      e = std::max(e, std::abs(ex));
    }
    return e;
  };
  const double e1 = euler_error(21), e2 = euler_error(41);
  CHECK(e1 < 1e-2);
  CHECK(e1 / e2 == doctest::Approx(4.0).epsilon(0.1));
}

TEST_CASE("catalog residuals are second order") {
  auto resid = [](const std::string& name, const Model& md, int count, const Params& p) {
    const auto g = CartesianGrid::cube(1, -kPi, kPi, count);
    return elliptic_residual(md, exact_field(name, g, p));
  };
  for (const auto& [name, md, p] : std::vector<std::tuple<std::string, Model, Params>>{
           {"linear_sin", Model::coupled_linear(0.0), {}},
           {"helmholtz_sin", Model::helmholtz(0.0), {}},
           {"gl_kink", Model::ginzburg_landau(1.0), {{"epsilon", 1.0}}}}) {
    CAPTURE(name);
    const double e1 = resid(name, md, 201, p), e2 = resid(name, md, 401, p);
    CHECK(e1 < 1e-2);
    CHECK(e1 / e2 == doctest::Approx(4.0).epsilon(0.05));
  }
  const auto g = CartesianGrid::cube(2, -1, 1, 11);
  const SpaceTimeField cal = exact_spacetime("caloric_linear", SpaceTimeGrid(g, 0, 1, 5));
  for (int k = 0; k < 5; ++k) CHECK(elliptic_residual(Model::zero(), cal.slice(k)) < 1e-13);
}

TEST_CASE("elliptic solver") {
  SUBCASE("linear data is reproduced exactly") {
    const auto g = CartesianGrid::cube(2, -1, 1, 17);
    Field bdry = from_function(g, 1, [](const Point& x) { return x[0]; });
    for (std::size_t i = 0; i < g.node_count(); ++i) if (!g.is_boundary(i)) bdry.at(i, 0) = 0.0;
    const Field u = solve_elliptic(Model::zero(), bdry);
    for (std::size_t i = 0; i < g.node_count(); ++i) CHECK(u.at(i, 0) == doctest::Approx(g.node(i)[0]).epsilon(1e-9));
    CHECK(u.meta().provenance == Provenance::Solved);
  }
  SUBCASE("coupled linear system reproduces the sine pair") {
    const auto g = CartesianGrid::cube(1, -kPi / 2, kPi / 2, 201);
    Field bdry = from_function(g, 2, [](const Point& x) { return std::sin(x[0]); });
    for (std::size_t i = 1; i + 1 < g.node_count(); ++i) bdry.at(i, 0) = bdry.at(i, 1) = 0.0;
    const Field u = solve_elliptic(Model::coupled_linear(0.0), bdry);
    CHECK(max_error(u, exact_field("linear_sin", g)) < 1e-3);
    CHECK(elliptic_residual(Model::coupled_linear(0.0), u) <= 1e-10);
  }
  SUBCASE("zero is a fixed point of the cubic") {
    const auto g = CartesianGrid::cube(2, -1, 1, 9);
    const Field u = solve_elliptic(Model::single_power(3), Field(g, 1));
    CHECK(u.max_abs() == 0.0);
  }
  SUBCASE("non-convergence is reported") {
    const auto g = CartesianGrid::cube(1, -1, 1, 41);
    Field bdry = from_function(g, 1, [](const Point& x) { return 2.0 * x[0]; });
    EllipticSolverConfig cfg;
    cfg.max_iter = 1;
    cfg.gauss_seidel_sweeps = 0;
    CHECK_THROWS_AS(solve_elliptic(Model::ginzburg_landau(0.05), bdry, cfg), ConvergenceError);
  }
}

TEST_CASE("parabolic solver") {
  SUBCASE("stationary caloric data") {
    const auto g = CartesianGrid::cube(1, -1, 1, 21);
    const Field init = from_function(g, 1, [](const Point& x) { return x[0]; });
    const SpaceTimeField u = solve_parabolic(Model::zero(), SpaceTimeGrid(g, 0, 0.5, 11), init);
    for (int k = 0; k < u.slices(); ++k) CHECK(max_error(u.slice(k), init) < 1e-12);
  }
  SUBCASE("u' = u in time, second order for Crank-Nicolson") {
    const auto g = CartesianGrid::cube(1, 0, 1, 5);
    const Field init = from_function(g, 1, [](const Point&) { return 1.0; });
    auto err = [&](int slices) {
      ParabolicSolverConfig cfg;
      cfg.boundary = BoundaryPolicy::Neumann;
      const SpaceTimeField u = solve_parabolic(Model::helmholtz(0.0), SpaceTimeGrid(g, 0, 1, slices), init, cfg);
      return std::abs(u.slice(slices - 1).at(2, 0) - std::exp(1.0));
    };
    const double e1 = err(21), e2 = err(41);
    CHECK(e1 < 1e-3);
    CHECK(e1 / e2 == doctest::Approx(4.0).epsilon(0.05));
  }
  SUBCASE("decaying sine mode") {
    const auto g = CartesianGrid::cube(1, 0, kPi, 101);
    const Field init = from_function(g, 1, [](const Point& x) { return std::sin(x[0]); });
    const SpaceTimeField u = solve_parabolic(Model::zero(), SpaceTimeGrid(g, 0, 1, 101), init);
    double e = 0.0;
    for (std::size_t i = 0; i < g.node_count(); ++i) {
      e = std::max(e, std::abs(u.slice(100).at(i, 0) - std::exp(-1.0) * std::sin(g.node(i)[0])));
    }
    CHECK(e < 1e-4);
  }
  SUBCASE("log potential refuses to go below its floor") {
    const auto g = CartesianGrid::cube(1, -1, 1, 21);
    const Field init = from_function(g, 1, [](const Point&) { return -1.0; });
    CHECK_THROWS_AS(solve_parabolic(Model::log_potential(0.0), SpaceTimeGrid(g, 0, 0.1, 3), init), ModelDomainError);
  }
}

TEST_CASE("coincidence set") {
  const auto g = CartesianGrid::cube(1, -1, 1, 201);
  const double h = g.spacing(0);
  SUBCASE("zero field lies entirely in Lambda") {
    CHECK(coincidence_indicator(Field(g, 1), {1e-8, 1e-8}) == std::vector<std::uint8_t>(g.node_count(), 1));
  }
  SUBCASE("linear field misses Lambda") {
    const Field u = from_function(g, 1, [](const Point& x) { return x[0]; });
    for (auto b : coincidence_indicator(u, {0.5, 0.5})) CHECK(b == 0);
  }
  SUBCASE("one-sided quadratic") {
    const Field u = from_function(g, 1, [](const Point& x) { return x[0] > 0 ? x[0] * x[0] : 0.0; });
    const Thresholds th{20 * h * h, 20 * h * h};
    const auto ind = coincidence_indicator(u, th);
    for (std::size_t i = 0; i < g.node_count(); ++i) {
      CAPTURE(g.node(i)[0]);
      CHECK(static_cast<bool>(ind[i]) == (g.node(i)[0] <= -h + 1e-12));
    }
    const SpaceTimeGrid st(g, 0, 1, 3);
    SpaceTimeField stu(st, 1);
    for (int k = 0; k < 3; ++k) stu.slice(k) = u;
    const CoincidenceSet chi = coincidence_set(stu, th);
    CHECK(chi.contains(0.5, {-0.5, 0, 0}));
    CHECK_FALSE(chi.contains(0.5, {0.5, 0, 0}));
    CHECK(chi.omega_fraction(0.5, {0.5, 0, 0}) == 1.0);
    CHECK(chi.omega_fraction(0.5, {-0.5, 0, 0}) == 0.0);
    // Indicator implies both thresholds.
    for (std::size_t i = 0; i < g.node_count(); ++i) {
      if (!chi.in_lambda(1, i)) continue;
      CHECK(std::abs(u.at(i, 0)) <= th.theta_u);
      CHECK(std::abs(nodal_gradient(u, i, 0, 0)) <= th.theta_g);
    }
  }
}
