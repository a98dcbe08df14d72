#include <doctest.h>

#include <cmath>
#include <memory>

#include "monotone/blowup.hpp"
#include "monotone/catalog.hpp"
#include "monotone/error.hpp"

using namespace monotone;

namespace {
const double kPi = std::acos(-1.0);
}

TEST_CASE("homogeneity residual") {
  const auto lin = exact_sampler("linear", 2);
  CHECK(homogeneity_residual(*lin, {}, 1.0, 0.1, 1.0) < 1e-20);
  // |grad u.x - 2u|^2 = x1^2 for u = x1, so the shell integral is pi (r_in^-2 - r_out^-2).
  CHECK(homogeneity_residual(*lin, {}, 2.0, 0.1, 1.0) == doctest::Approx(99 * kPi).epsilon(1e-9));
  const auto xy = exact_sampler("x1x2", 3);
  CHECK(homogeneity_residual(*xy, {}, 2.0, 0.2, 1.0) < 1e-20);
}

TEST_CASE("degree estimates") {
  const auto xy = exact_sampler("x1x2", 2);
  const DegreeFit fit = estimate_degree(*xy, {}, log_radii(0.1, 1.0, 6));
  CHECK(fit.beta == doctest::Approx(2.0).epsilon(1e-10));
  CHECK(fit.rms_residual < 1e-10);
  const auto root = manufactured_sampler(0.5, angular_profile("one"), 3);
  CHECK(estimate_degree(*root, {}, log_radii(0.1, 1.0, 6)).beta == doctest::Approx(0.5).epsilon(1e-10));
  const auto cq = exact_spacetime_sampler("caloric_quadratic", 1);
  CHECK(estimate_degree_parabolic(*cq, log_radii(0.2, 1.0, 5)).beta == doctest::Approx(2.0).epsilon(1e-8));

  const std::vector<double> r = log_radii(0.1, 1.0, 3);
  CHECK(r.front() == doctest::Approx(1.0));
  CHECK(r[1] == doctest::Approx(std::sqrt(0.1)));
  CHECK(r.back() == doctest::Approx(0.1));
}

TEST_CASE("rescaling homogeneous data reproduces it") {
  const auto g = CartesianGrid::cube(2, -1, 1, 11);
  const auto xy = exact_sampler("x1x2", 2);
  const Field r = rescale_elliptic(*xy, {}, 0.3, 2.0, g);
  for (std::size_t i = 0; i < g.node_count(); ++i) {
    const Point x = g.node(i);
    CHECK(r.at(i, 0) == doctest::Approx(x[0] * x[1]).epsilon(1e-12));
  }
  CHECK(r.meta().provenance == Provenance::Rescaled);

  const auto cq = exact_spacetime_sampler("caloric_quadratic", 1, {{"T", 0.5}});
  const SpaceTimeGrid probe(CartesianGrid::cube(1, -1, 1, 5), -1.0, -0.5, 3);
  const SpaceTimeField rp = rescale_parabolic(*cq, 0.5, {}, 0.25, 2.0, probe);
  for (int k = 0; k < probe.slices(); ++k) {
    for (std::size_t i = 0; i < probe.space().node_count(); ++i) {
      const double x = probe.space().node(i)[0];
      CHECK(rp.slice(k).at(i, 0) == doctest::Approx(x * x + 2 * probe.time(k)).epsilon(1e-12));
    }
  }
  CHECK(parabolic_homogeneity_residual(*exact_spacetime_sampler("caloric_quadratic", 1), 2.0) < 1e-16);
}

TEST_CASE("Ginzburg-Landau kink blows up to its linearization") {
  const double eps = 0.5;
  const auto kink = exact_sampler("gl_kink", 1, {{"epsilon", eps}});
  const BlowupReport rep = blowup_study(kink, Model::ginzburg_landau(eps), {}, 1.0, {0.4, 0.2, 0.1, 0.05});
  REQUIRE(rep.scales.size() == 4);
  CHECK(rep.residual_decreasing);
  CHECK(rep.scales.back().residual < rep.scales.front().residual / 10);
  CHECK(rep.scales.back().degree == doctest::Approx(1.0).epsilon(1e-2));
  CHECK_FALSE(rep.degenerate);

  // rho^{-1} tanh(rho x / (sqrt 2 eps)) -> x / (sqrt 2 eps) on the probe.
  const auto g = CartesianGrid::cube(1, -1, 1, 21);
  const Field r = rescale_elliptic(*kink, {}, 1e-3, 1.0, g);
  for (std::size_t i = 0; i < g.node_count(); ++i) {
    CHECK(r.at(i, 0) == doctest::Approx(g.node(i)[0] / (std::sqrt(2.0) * eps)).epsilon(1e-5));
  }
}

TEST_CASE("blow-up input validation") {
  const auto lin = exact_sampler("linear", 1);
  CHECK_THROWS(blowup_study(lin, Model::zero(), {}, 1.0, {0.1, 0.2}));
  const auto boxed = exact_sampler("linear", 1, {}, 0.5);
  CHECK_THROWS_AS(blowup_study(boxed, Model::zero(), {}, 1.0, {1.0, 0.5}), OutOfDomainError);
}
