#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "monotone/error.hpp"
#include "monotone/expression.hpp"
#include "monotone/model.hpp"

using namespace monotone;

namespace {

std::vector<Model> all_models() {
  return {Model::zero(2),
          Model::coupled_linear(0.5),
          Model::helmholtz(0.0, 2),
          Model::ginzburg_landau(0.7, 2),
          Model::coupled_power(2, 1, 0.3),
          Model::coupled_power(0.5, 1.5, 0.0),
          Model::single_power(3),
          Model::single_power(0.5),
          Model::single_power(-0.5),
          Model::log_potential(1.0),
          Model::custom(1, "u^4/4 - u^2/2"),
          Model::custom(2, "sin(u1)*cos(u2)", {"cos(u1)*cos(u2)", "-sin(u1)*sin(u2)"})};
}

// Sample point inside the admissible range, away from the floor.
std::vector<double> sample_point(const Model& md, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> U(-1.5, 1.5);
  std::vector<double> u(md.components());
  for (int i = 0; i < md.components(); ++i) {
    u[i] = md.domain(i).lo > -INFINITY ? 0.2 + std::abs(U(rng)) : U(rng);
  }
  return u;
}

}  // namespace

TEST_CASE("potential values") {
  const double gl[2] = {1.0, 0.0};
  CHECK(Model::ginzburg_landau(1.0, 2).F(gl) == 0.0);
  const double uv[2] = {2.0, 3.0};
  CHECK(Model::coupled_linear(0.0).F(uv) == 6.0);
  const double two = 2.0;
  CHECK(Model::single_power(3).F(&two) == 4.0);
  const double e = std::exp(1.0);
  CHECK(Model::log_potential(0.25).F(&e) == doctest::Approx(1.25));
}

TEST_CASE("gradient values") {
  double out[2];
  const double ab[2] = {0.3, -1.7};
  Model::coupled_linear(4.0).f(ab, out);
  CHECK(out[0] == -1.7);
  CHECK(out[1] == 0.3);

  const double unit[2] = {0.6, 0.8};
  Model::ginzburg_landau(0.3, 2).f(unit, out);
  CHECK(std::abs(out[0]) < 1e-12);
  CHECK(std::abs(out[1]) < 1e-12);

  const double p = 2, q = 3, u = 1.3, v = 0.7;
  const double w[2] = {u, v};
  Model::coupled_power(p, q, 0.0).f(w, out);
  CHECK(out[0] == doctest::Approx(std::pow(u, p) * std::pow(v, q + 1) / (q + 1)));
  CHECK(out[1] == doctest::Approx(std::pow(u, p + 1) * std::pow(v, q) / (p + 1)));
}

TEST_CASE("gradient consistency with second-order convergence") {
  std::mt19937_64 rng(11);
  for (const Model& md : all_models()) {
    CAPTURE(md.name());
    const int m = md.components();
    double worst_ratio = 4.0;
    int measured = 0;
    for (int k = 0; k < 1000; ++k) {
      const std::vector<double> u = sample_point(md, rng);
      std::vector<double> f(m);
      md.f(u.data(), f.data());
      auto fd_error = [&](double h) {
        double err = 0.0;
        for (int i = 0; i < m; ++i) {
          std::vector<double> a = u, b = u;
          a[i] += h;
          b[i] -= h;
          err = std::max(err, std::abs((md.F(a.data()) - md.F(b.data())) / (2 * h) - f[i]));
        }
        return err;
      };
      const double e1 = fd_error(1e-2), e2 = fd_error(5e-3);
      CHECK(e1 < 1e-2 * (1.0 + std::abs(f[0])) * 10);
      if (e1 > 1e-9) {
        worst_ratio = std::min(worst_ratio, e1 / e2);
        ++measured;
      }
    }
    if (measured > 0) CHECK(std::abs(worst_ratio - 4.0) < 0.6);
  }
}

TEST_CASE("interior integrand") {
  for (double beta : {-1.0, 0.5, 2.0, 7.0}) {
    const double u1[2] = {0.6, 0.8};
    CHECK(std::abs(Model::ginzburg_landau(0.4, 2).interior_integrand(beta, u1)) < 1e-12);
    const double one = -1.0;
    CHECK(std::abs(Model::ginzburg_landau(0.4, 1).interior_integrand(beta, &one)) < 1e-12);
  }
  for (double p : {0.5, 2.0, 3.0}) {
    const double beta = 1.3, u = 1.7;
    const double expected = (beta * (1 - p) - 2) / (p + 1) * std::pow(u, p + 1);
    CHECK(Model::single_power(p).interior_integrand(beta, &u) == doctest::Approx(expected));
  }
  {
    const double p = 1, q = 2, c = 0.4, beta = 3, w[2] = {0.9, 1.1};
    const double expected = 2 * (beta - 1) * c - (beta * (p + q) + 2) / ((p + 1) * (q + 1)) * std::pow(w[0], p + 1) *
                                                      std::pow(w[1], q + 1);
    CHECK(Model::coupled_power(p, q, c).interior_integrand(beta, w) == doctest::Approx(expected));
  }
  // beta = 2/(1-p) zeroes the power integrand identically.
  for (double p : {0.5, 3.0, -0.5}) {
    const Model md = Model::single_power(p);
    for (double u : {0.1, 1.0, 4.5, 9.0}) {
      const double scale = std::pow(u, p + 1);
      CHECK(std::abs(md.interior_integrand(2 / (1 - p), &u)) <= 1e-14 * std::max(1.0, scale) * 10);
    }
  }
}

TEST_CASE("Ginzburg-Landau integrand sign") {
  const double eps = 0.8;
  const Model md = Model::ginzburg_landau(eps, 2);
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  for (double beta : {1.2, 2.0, 4.0, 10.0}) {
    for (int k = 0; k < 2000; ++k) {
      const double ang = 2 * std::acos(-1.0) * U(rng);
      const double s2 = 3.0 * U(rng);
      const double w[2] = {std::sqrt(s2) * std::cos(ang), std::sqrt(s2) * std::sin(ang)};
      const double expected = (s2 - 1) * ((beta + 1) * s2 + (beta - 1)) / (2 * eps * eps);
      CHECK(md.interior_integrand(beta, w) == doctest::Approx(expected).epsilon(1e-12).scale(1.0));
      CHECK((md.interior_integrand(beta, w) >= -1e-12) == (s2 >= 1.0 - 1e-12));
    }
  }
}

TEST_CASE("domain errors name the component") {
  const double bad = -0.5;
  CHECK_THROWS_AS(Model::log_potential(0.0).F(&bad), ModelDomainError);
  try {
    const double w[2] = {1.0, -1.0};
    Model::coupled_power(0.5, 0.5, 0.0).F(w);
    FAIL("expected a domain error");
  } catch (const ModelDomainError& e) {
    CHECK(e.component() == 1);
  }
  const double tiny = 1e-9;
  CHECK_THROWS_AS(Model::single_power(-0.5).F(&tiny), ModelDomainError);
}

TEST_CASE("custom models reject inconsistent gradients") {
  CHECK_THROWS_AS(Model::custom(1, "u^2", {"u"}), ArgumentError);
  CHECK_NOTHROW(Model::custom(1, "u^2", {"2*u"}));
  CHECK_THROWS(Expression("u1 + ", 1));
  const double x[2] = {2.0, 3.0};
  CHECK(Expression("u*v + exp(0) - pi^0 + abs(-u2)", 2)(x) == doctest::Approx(9.0));
}

TEST_CASE("pointwise beta intervals") {
  SUBCASE("sublinear power") {
    const auto rep = pointwise_beta_interval(Model::single_power(0.5), {{0.0, 10.0}}, 0.0, 8.0, 17);
    for (std::size_t k = 0; k < rep.betas.size(); ++k) CHECK(rep.admissible[k] == (rep.betas[k] >= 4.0));
  }
  SUBCASE("superlinear power") {
    const auto rep = pointwise_beta_interval(Model::single_power(3), {{0.0, 10.0}}, -3.0, 1.0, 17);
    for (std::size_t k = 0; k < rep.betas.size(); ++k) CHECK(rep.admissible[k] == (rep.betas[k] <= -1.0));
  }
  SUBCASE("Ginzburg-Landau outside the unit well") {
    const auto rep = pointwise_beta_interval(Model::ginzburg_landau(1.0), {{1.0, 2.0}}, 2.0, 2.0 + 1e-9, 2);
    CHECK(rep.admissible[0]);
  }
  SUBCASE("large beta for the coupled linear system") {
    const auto rep = pointwise_beta_interval(Model::coupled_linear(0.5), {{-1.0, 1.0}, {-1.0, 1.0}}, 1.0, 4.0, 7);
    CHECK_FALSE(rep.admissible.front());
    CHECK(rep.admissible.back());
  }
  CHECK_THROWS_AS(pointwise_beta_interval(Model::single_power(3), {{1.0, 0.0}}, 0.0, 1.0, 3), ArgumentError);
}
