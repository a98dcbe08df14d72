#include <doctest.h>

#include <cmath>
#include <memory>

#include "monotone/catalog.hpp"
#include "monotone/cutoff.hpp"
#include "monotone/error.hpp"
#include "monotone/parabolic.hpp"

using namespace monotone;

namespace {

// Composite Simpson rule, independent of the library's Gauss rules.
template <class Fn>
double simpson(Fn f, double a, double b, int panels = 2000) {
  const double h = (b - a) / panels;
  double s = f(a) + f(b);
  for (int k = 1; k < panels; ++k) s += (k % 2 ? 4.0 : 2.0) * f(a + k * h);
  return s * h / 3.0;
}

std::shared_ptr<AnalyticSpaceTimeSampler> scaled(std::shared_ptr<AnalyticSpaceTimeSampler> base, double factor) {
  return std::make_shared<AnalyticSpaceTimeSampler>(
      base->dim(), base->components(),
      [base, factor](double t, const Point& x, SpaceTimeJet& j) {
        base->sample(t, x, j);
        for (int c = 0; c < j.m; ++c) {
          j.u[c] *= factor;
          j.u_t[c] *= factor;
          for (int d = 0; d < kMaxDim; ++d) j.grad[c][d] *= factor;
        }
      },
      base->t_min(), base->t_max());
}

}  // namespace

TEST_CASE("Psi of the caloric linear field vanishes for beta = 1") {
  const auto u = exact_spacetime_sampler("caloric_linear", 2);
  for (double r : {0.1, 0.3, 0.6}) {
    const PsiValue v = psi(*u, Model::zero(), 1.0, {}, 1.0, r, Side::Minus);
    CHECK(v.energy_term == doctest::Approx(3.0).epsilon(1e-8));
    CHECK(v.u2_term == doctest::Approx(3.0).epsilon(1e-8));
    CHECK(std::abs(v.psi) < 1e-8);
  }
}

TEST_CASE("Psi of exponential growth against one-dimensional time integrals") {
  const double a = 0.7, T = 0.5, beta = 0.5;
  const auto u = exact_spacetime_sampler("exp_growth", 1, {{"amplitude", a}});
  for (double r : {0.1, 0.25}) {
    const double lo = T - 4 * r * r, hi = T - r * r;
    const double energy = -std::pow(r, -2 * beta) * simpson([&](double t) { return a * a * std::exp(2 * t); }, lo, hi);
    const double u2 = 0.5 * beta * std::pow(r, -2 * beta) *
                      simpson([&](double t) { return a * a * std::exp(2 * t) / (T - t); }, lo, hi);
    const PsiValue v = psi(*u, Model::helmholtz(0.0), T, {}, beta, r, Side::Minus);
    CHECK(v.energy_term == doctest::Approx(energy).epsilon(1e-8));
    CHECK(v.u2_term == doctest::Approx(u2).epsilon(1e-8));
  }
}

TEST_CASE("parabolic identities") {
  ParabolicOptions opt;
  const auto cal = exact_spacetime_sampler("caloric_linear", 1);
  const IdentityReport ibp = parabolic_ibp_residual(*cal, Model::zero(), 1.0, {}, 0.3, Side::Minus, opt);
  CHECK(ibp.pass);
  const IdentityReport mono = verify_monotonicity_parabolic(*cal, Model::zero(), 1.0, {}, 1.0, 0.1, 0.4, Side::Minus, opt);
  CHECK(std::abs(mono.lhs) < 1e-8);
  CHECK(std::abs(mono.rhs) < 1e-8);
  CHECK(mono.pass);

  const auto growth = exact_spacetime_sampler("exp_growth", 1);
  const IdentityReport eg =
      verify_monotonicity_parabolic(*growth, Model::helmholtz(0.0), 0.0, {}, 0.5, 0.1, 0.3, Side::Minus, opt);
  CHECK(eg.pass);
  CHECK(eg.residual <= eg.tolerance);
  CHECK(std::abs(eg.lhs) > eg.tolerance);
}

TEST_CASE("derivative summands") {
  const auto u = exact_spacetime_sampler("heat_sine", 1);
  const PsiDerivative d = psi_derivative_decomposition(*u, Model::zero(), 1.0, {}, 0.7, 0.2, Side::Minus);
  CHECK(d.residual_part >= 0.0);
  CHECK(d.interior_part == doctest::Approx(0.0));  // F = 0 and u.f = 0
  CHECK(d.cutoff_part == 0.0);
}

TEST_CASE("radius and layer limits") {
  const auto st = std::make_shared<const SpaceTimeField>(
      exact_spacetime("caloric_linear", SpaceTimeGrid(CartesianGrid::cube(1, -3, 3, 61), 0.0, 1.0, 11)));
  GridSpaceTimeSampler g(st);
  CHECK(psi_radius_limit(g, 1.0, Side::Minus) == doctest::Approx(0.5));
  CHECK(psi_radius_limit(g, 0.0, Side::Plus) == doctest::Approx(0.5));
  CHECK_THROWS_AS(psi(g, Model::zero(), 1.0, {}, 1.0, 0.6, Side::Minus), OutOfDomainError);
  CHECK_NOTHROW(psi(g, Model::zero(), 1.0, {}, 1.0, 0.4, Side::Minus));
}

TEST_CASE("admissibility for u_t - Delta u = u") {
  // 2(beta - 1)(u^2/2 + c) - beta u^2 = (beta - 1) 2c - u^2 >= 0 needs c large.
  const auto u = exact_spacetime_sampler("exp_growth", 1, {{"amplitude", 0.5}});
  CHECK(beta_admissible_parabolic(*u, Model::helmholtz(2.0), 0.0, {}, 2.0, 0.2, Side::Minus).admissible);
  CHECK_FALSE(beta_admissible_parabolic(*u, Model::helmholtz(0.0), 0.0, {}, 2.0, 0.2, Side::Minus).admissible);
}

TEST_CASE("free-boundary functional needs a point of Lambda") {
  const auto g = CartesianGrid::cube(1, -1.5, 1.5, 61);
  const SpaceTimeGrid stg(g, 0.0, 1.0, 11);
  SpaceTimeField zero(stg, 1);
  const CoincidenceSet all = coincidence_set(zero, {1e-8, 1e-8});
  const auto z = std::make_shared<const SpaceTimeField>(zero);
  GridSpaceTimeSampler s(z);
  const FreeBoundaryPsi fb = psi_free_boundary(s, Model::zero(), all, 1.0, {}, 2.0, 0.2, Side::Minus, 0.3);
  CHECK(fb.value.psi == 0.0);
  CHECK(fb.total == doctest::Approx(0.3 * error_integral_E(0.2, 1, 2.0)));

  const auto lin = std::make_shared<const SpaceTimeField>(exact_spacetime("caloric_linear", stg));
  const CoincidenceSet none = coincidence_set(*lin, {1e-8, 1e-8});
  GridSpaceTimeSampler ls(lin);
  CHECK_THROWS_AS(psi_free_boundary(ls, Model::zero(), none, 1.0, {}, 2.0, 0.2, Side::Minus, 0.3), HypothesisError);
  CHECK_THROWS_AS(psi_free_boundary(s, Model::zero(), all, 1.0, {}, 2.0, 0.2, Side::Minus, -1.0), ArgumentError);
}

TEST_CASE("envelope constant scales quadratically with the field") {
  const auto base = exact_spacetime_sampler("heat_sine", 1);
  const std::vector<double> radii{0.1, 0.2, 0.3, 0.4};
  const CalibrationReport one = calibrate_C(*base, Model::zero(), nullptr, 1.0, {}, 2.0, Side::Minus, radii);
  const CalibrationReport two = calibrate_C(*scaled(base, 2.0), Model::zero(), nullptr, 1.0, {}, 2.0, Side::Minus, radii);
  CHECK(one.C > 0.0);
  CHECK(two.h1_norm == doctest::Approx(4 * one.h1_norm).epsilon(1e-12));
  CHECK(two.h2_norm == doctest::Approx(4 * one.h2_norm).epsilon(1e-12));
  CHECK(two.C == doctest::Approx(4 * one.C).epsilon(1e-12));
}

TEST_CASE("scan of the caloric field") {
  const auto u = exact_spacetime_sampler("caloric_linear", 1);
  const ParabolicFunctionalReport rep = psi_scan(*u, Model::zero(), 1.0, {}, 1.0, Side::Minus, 0.1, 0.4, 6);
  CHECK(rep.monotone_violations == 0);
  CHECK(rep.identity_failures == 0);
  CHECK_FALSE(rep.truncation_warning);
  for (const PsiScanRow& row : rep.rows) CHECK(std::abs(row.psi) < 1e-8);
}
