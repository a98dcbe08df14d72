#include <doctest.h>

#include <cmath>
#include <memory>

#include "monotone/catalog.hpp"
#include "monotone/elliptic.hpp"
#include "monotone/error.hpp"
#include "monotone/sampler.hpp"

using namespace monotone;

namespace {

const double kPi = std::acos(-1.0);

std::shared_ptr<GridFieldSampler> on_grid(Field f) {
  return std::make_shared<GridFieldSampler>(std::make_shared<const Field>(std::move(f)));
}

// Phi for u = sin(x) with F = u^2/2 in one dimension, integrated by hand.
double phi_sine(double r, double beta) {
  return std::pow(r, 1 - 2 * beta) * std::sin(2 * r) - 2 * beta * std::pow(r, -2 * beta) * std::pow(std::sin(r), 2);
}

}  // namespace

TEST_CASE("Phi of a linear field with beta = 1 vanishes") {
  const auto u = exact_sampler("linear", 3);
  Quadrature q(3);
  for (double r : {0.3, 1.0, 2.5}) {
    const PhiValue v = phi(*u, Model::zero(), {}, 1.0, r, q);
    CHECK(v.vol_term == doctest::Approx(4 * kPi / 3).epsilon(1e-10));
    CHECK(v.bdry_term == doctest::Approx(4 * kPi / 3).epsilon(1e-10));
    CHECK(std::abs(v.phi) < 1e-10);
  }
  // Grid data: the interpolant reproduces linear fields exactly.
  const auto g = on_grid(exact_field("linear", CartesianGrid::cube(3, -1, 1, 17)));
  CHECK(std::abs(phi(*g, Model::zero(), {}, 1.0, 0.7, q).phi) < 1e-9);
}

TEST_CASE("Phi of the degree-two harmonic with beta = 2 is constant") {
  const auto u = exact_sampler("x1x2", 3);
  Quadrature q(3);
  for (double r : {0.2, 0.9, 3.0}) CHECK(std::abs(phi(*u, Model::zero(), {}, 2.0, r, q).phi) < 1e-10);
}

TEST_CASE("Phi of the sine matches the closed form") {
  const auto u = exact_sampler("helmholtz_sin", 1);
  Quadrature q(1);
  for (double beta : {0.5, 1.0, 2.0}) {
    for (double r : {0.4, 1.0, 2.0}) {
      CHECK(phi(*u, Model::helmholtz(0.0), {}, beta, r, q).phi ==
            doctest::Approx(phi_sine(r, beta)).epsilon(1e-10));
    }
  }
}

TEST_CASE("derivative decomposition") {
  const auto u = exact_sampler("linear", 3);
  Quadrature q(3);
  for (double r : {0.5, 1.5}) {
    const PhiDerivative d = phi_derivative_decomposition(*u, Model::zero(), {}, 0.0, r, q);
    CHECK(d.boundary_part == doctest::Approx(2 * 4 * kPi * r / 3).epsilon(1e-10));
    CHECK(d.interior_part == 0.0);
  }
  // Against a central difference of the closed form.
  const auto s = exact_sampler("helmholtz_sin", 1);
  Quadrature q1(1);
  const double r = 0.8, beta = 1.5, h = 1e-5;
  const PhiDerivative d = phi_derivative_decomposition(*s, Model::helmholtz(0.0), {}, beta, r, q1);
  CHECK(d.boundary_part >= 0.0);
  CHECK(d.boundary_part + d.interior_part ==
        doctest::Approx((phi_sine(r + h, beta) - phi_sine(r - h, beta)) / (2 * h)).epsilon(1e-7));
}

TEST_CASE("integral identities") {
  EllipticOptions opt;
  const auto lin = exact_sampler("linear", 3);
  for (double r : {0.5, 1.0}) {
    const IdentityReport p = pohozaev_residual(*lin, Model::zero(), {}, r, opt);
    CHECK(p.lhs == doctest::Approx(4 * kPi * r * r * r / 3).epsilon(1e-10));
    CHECK(p.pass);
    CHECK(ibp_residual(*lin, Model::zero(), {}, r, opt).pass);
  }
  const auto grid = on_grid(exact_field("linear_sin", CartesianGrid::cube(1, -kPi, kPi, 2001)));
  const IdentityReport ibp = ibp_residual(*grid, Model::coupled_linear(0.0), {}, 2.0, opt);
  CHECK(ibp.pass);
  CHECK(ibp.residual <= ibp.tolerance);

  const auto noise = on_grid(noise_field(CartesianGrid::cube(1, -kPi, kPi, 2001), 2, 1234));
  const IdentityReport bad = ibp_residual(*noise, Model::coupled_linear(0.0), {}, 2.0, opt);
  CHECK_FALSE(bad.pass);
  CHECK(bad.residual > 10 * bad.tolerance);
}

TEST_CASE("monotonicity identity") {
  EllipticOptions opt;
  const auto s = exact_sampler("helmholtz_sin", 1);
  const double beta = 1.0, rho = 0.5, sigma = 2.0;
  const IdentityReport rep = verify_monotonicity_elliptic(*s, Model::helmholtz(0.0), {}, beta, rho, sigma, opt);
  CHECK(rep.lhs == doctest::Approx(phi_sine(sigma, beta) - phi_sine(rho, beta)).epsilon(1e-10));
  CHECK(rep.pass);

  const auto xy = exact_sampler("x1x2", 2);
  const IdentityReport zero = verify_monotonicity_elliptic(*xy, Model::zero(), {}, 2.0, 0.3, 1.0, opt);
  CHECK(std::abs(zero.lhs) < 1e-10);
  CHECK(std::abs(zero.rhs) < 1e-10);

  const auto noise = on_grid(noise_field(CartesianGrid::cube(1, -3, 3, 601), 1, 99));
  CHECK_THROWS_AS(verify_monotonicity_elliptic(*noise, Model::helmholtz(0.0), {}, 1.0, 0.5, 1.5, opt),
                  HypothesisError);
}

TEST_CASE("beta admissibility on a ball") {
  const auto s = exact_sampler("linear_sin", 1);
  // (beta - 1) c >= sup |uv| = 1 for c = 0.5 once beta >= 3.
  CHECK(beta_admissible_elliptic(*s, Model::coupled_linear(0.5), {}, 3.5, 2.0).admissible);
  CHECK_FALSE(beta_admissible_elliptic(*s, Model::coupled_linear(0.5), {}, 1.0, 2.0).admissible);
}

TEST_CASE("scan of a manufactured homogeneous field") {
  const auto u = manufactured_sampler(1.5, angular_profile("d1"), 2);
  const FunctionalReport rep = phi_scan(*u, Model::zero(), {}, 1.5, 0.2, 1.0, 9);
  CHECK(rep.monotone_violations == 0);
  CHECK(rep.admissible_count == rep.rows.size());
  for (const PhiScanRow& row : rep.rows) CHECK(row.phi == doctest::Approx(rep.rows.front().phi).epsilon(1e-9));
  CHECK(rep.limit_M == doctest::Approx(rep.rows.front().phi).epsilon(1e-8));
  CHECK(rep.identity_failures == 0);

  CHECK(richardson_limit(std::array<double, 3>{1, 2, 3}.data(), std::array<double, 3>{3, 6, 11}.data()) ==
        doctest::Approx(2.0));
}

TEST_CASE("balls outside the grid are rejected") {
  const auto g = on_grid(exact_field("linear", CartesianGrid::cube(2, -1, 1, 9)));
  Quadrature q(2);
  CHECK_THROWS_AS(phi(*g, Model::zero(), {}, 1.0, 1.5, q), OutOfDomainError);
}
