#include <doctest.h>

#include <cmath>
#include <random>

#include "monotone/cutoff.hpp"
#include "monotone/error.hpp"
#include "monotone/kernel.hpp"
#include "monotone/quadrature.hpp"

using namespace monotone;

namespace {

const double kPi = std::acos(-1.0);

ScalarSampler constant(int n, double c) { return {n, [c](const Point&) { return c; }, {}}; }

}  // namespace

TEST_CASE("sphere weights sum to the unit sphere area") {
  for (int n = 1; n <= 3; ++n) {
    SphereQuadrature s(n, {});
    double sum = 0.0;
    for (int j = 0; j < s.size(); ++j) sum += s.weight(j);
    CHECK(sum == doctest::Approx(unit_sphere_area(n)).epsilon(1e-12));
  }
  CHECK(unit_sphere_area(2) == doctest::Approx(2 * kPi));
  CHECK(unit_sphere_area(3) == doctest::Approx(4 * kPi));
}

TEST_CASE("sphere integrals") {
  Quadrature q3(3);
  CHECK(sphere_integral(constant(3, 1.0), {}, 2.0, q3) == doctest::Approx(16 * kPi).epsilon(1e-10));
  ScalarSampler x1sq{3, [](const Point& p) { return p[0] * p[0]; }, {}};
  CHECK(sphere_integral(x1sq, {}, 1.0, q3) == doctest::Approx(4 * kPi / 3).epsilon(1e-8));
  ScalarSampler x1{3, [](const Point& p) { return p[0]; }, {}};
  CHECK(std::abs(sphere_integral(x1, {0.3, 0, 0}, 1.5, q3) - 0.3 * 4 * kPi * 2.25) < 1e-9);

  // Monte-Carlo cross-check of the second moment on the sphere.
  std::mt19937_64 rng(7);
  std::normal_distribution<double> g;
  double acc = 0.0;
  const int samples = 200000;
  for (int k = 0; k < samples; ++k) {
    const double a = g(rng), b = g(rng), c = g(rng);
    acc += a * a / (a * a + b * b + c * c);
  }
  CHECK(4 * kPi * acc / samples == doctest::Approx(4 * kPi / 3).epsilon(1e-2));

  for (int n = 1; n <= 3; ++n) {
    Quadrature q(n);
    const double r = 1.7;
    CHECK(sphere_integral(constant(n, 1.0), {}, r, q) ==
          doctest::Approx(unit_sphere_area(n) * std::pow(r, n - 1)).epsilon(1e-10));
  }
}

TEST_CASE("ball integrals") {
  Quadrature q3(3), q2(2);
  CHECK(ball_integral(constant(3, 1.0), {}, 1.0, q3) == doctest::Approx(4 * kPi / 3).epsilon(1e-10));
  CHECK(ball_integral(constant(2, 1.0), {}, 2.0, q2) == doctest::Approx(4 * kPi).epsilon(1e-10));
  ScalarSampler r2{3, [](const Point& p) { return dot(p, p, 3); }, {}};
  CHECK(ball_integral(r2, {}, 1.0, q3) == doctest::Approx(4 * kPi / 5).epsilon(1e-10));
}

TEST_CASE("ball leaving the sampling region is rejected") {
  ScalarSampler boxed{2, [](const Point&) { return 1.0; }, [](const Point& x0) { return 1.0 - std::abs(x0[0]); }};
  Quadrature q(2);
  CHECK_THROWS_AS(ball_integral(boxed, {}, 1.5, q), OutOfDomainError);
  CHECK_NOTHROW(ball_integral(boxed, {}, 0.9, q));
}

TEST_CASE("backward heat kernel values") {
  for (int n = 1; n <= 3; ++n) {
    CHECK(backward_heat_kernel(0.0, {}, 1.0 / (4 * kPi), {}, n) == doctest::Approx(1.0));
  }
  CHECK_THROWS_AS(backward_heat_kernel(1.0, {}, 1.0, {}, 2), SingularTimeError);
  // Decaying convention: negative above t0 and decaying in x; literal grows.
  const double below = backward_heat_kernel(1.5, {0.5, 0, 0}, 1.0, {}, 1);
  CHECK(below < 0.0);
  CHECK(std::abs(backward_heat_kernel(1.5, {3.0, 0, 0}, 1.0, {}, 1)) < std::abs(below));
  CHECK(std::abs(backward_heat_kernel(1.5, {3.0, 0, 0}, 1.0, {}, 1, KernelConvention::Literal)) >
        std::abs(backward_heat_kernel(1.5, {0.5, 0, 0}, 1.0, {}, 1, KernelConvention::Literal)));
}

TEST_CASE("kernel mass and second moment") {
  Quadrature q3(3), q1(1);
  for (double s : {0.05, 0.3}) {
    const double R = std::sqrt(4 * s * 40.0);
    ScalarSampler G{3, [s](const Point& p) { return backward_heat_kernel(0.0, p, s, {}, 3); }, {}};
    CHECK(ball_integral(G, {}, R, q3) == doctest::Approx(1.0).epsilon(1e-8));
    ScalarSampler G1{1, [s](const Point& p) { return p[0] * p[0] * backward_heat_kernel(0.0, p, s, {}, 1); }, {}};
    CHECK(ball_integral(G1, {}, R, q1) == doctest::Approx(2 * s).epsilon(1e-8));
  }
}

TEST_CASE("kernel gradient and time derivative are analytic") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  for (int k = 0; k < 100; ++k) {
    const Point x{U(rng), U(rng), U(rng)}, x0{0.1, -0.2, 0.05};
    const double t = -0.5 + 0.4 * U(rng), t0 = 0.2;
    const double G = backward_heat_kernel(t, x, t0, x0, 3);
    const Point grad = backward_heat_kernel_gradient(t, x, t0, x0, 3);
    for (int d = 0; d < 3; ++d) {
      const double expected = (x[d] - x0[d]) * G / (2 * (t - t0));
      CHECK(std::abs(grad[d] - expected) / std::max(std::abs(G), 1e-300) < 1e-6);
    }
    // Heat identity with the analytic time derivative.
    const double h = 1e-4;
    double lap = 0.0;
    for (int d = 0; d < 3; ++d) {
      Point a = x, b = x;
      a[d] += h;
      b[d] -= h;
      lap += (backward_heat_kernel(t, a, t0, x0, 3) - 2 * G + backward_heat_kernel(t, b, t0, x0, 3)) / (h * h);
    }
    CHECK(std::abs(backward_heat_kernel_dt(t, x, t0, x0, 3) + lap) < 1e-4 * std::max(1.0, std::abs(G) / (t0 - t)));
  }
}

TEST_CASE("layer integrals") {
  LayerIntegrator li(2);
  LayerRegion region;
  region.dim = 2;
  const double T = 1.0, r = 0.3;
  SpaceTimeScalar one{region, [](double, const Point&) { return 1.0; }};
  CHECK(layer_gaussian_integral(one, T, {}, r, Side::Minus, li).value == doctest::Approx(3 * r * r).epsilon(1e-6));
  SpaceTimeScalar moment{region, [T](double t, const Point& p) { return p[0] * p[0] / (T - t); }};
  CHECK(layer_gaussian_integral(moment, T, {}, r, Side::Minus, li).value ==
        doctest::Approx(6 * r * r).epsilon(1e-6));
  SpaceTimeScalar zero{region, [](double, const Point&) { return 0.0; }};
  CHECK(layer_gaussian_integral(zero, T, {}, r, Side::Minus, li).value == 0.0);
  // Plus side under the decaying convention: kernel mass is -1 per slice.
  CHECK(layer_gaussian_integral(one, T, {}, r, Side::Plus, li).value == doctest::Approx(-3 * r * r).epsilon(1e-6));

  const auto [a, b] = layer_interval(T, r, Side::Plus);
  CHECK(a == doctest::Approx(T + r * r));
  CHECK(b == doctest::Approx(T + 4 * r * r));

  LayerRegion short_region = region;
  short_region.t_min = 0.9;
  SpaceTimeScalar clipped{short_region, [](double, const Point&) { return 1.0; }};
  CHECK_THROWS_AS(layer_gaussian_integral(clipped, T, {}, r, Side::Minus, li), OutOfDomainError);
}

TEST_CASE("cutoff profile") {
  CHECK(cutoff_profile(0.4) == 1.0);
  CHECK(cutoff_profile(0.8) == 0.0);
  CHECK(cutoff_profile(0.625) == 0.5);
  const double mid = cutoff_profile(0.55);
  CHECK(mid > 0.0);
  CHECK(mid < 1.0);
  // Closed form evaluated independently at d = 0.55: t = 0.2.
  const double t = 0.2, psi_t = std::exp(-1 / t), psi_1t = std::exp(-1 / (1 - t));
  CHECK(mid == doctest::Approx(1.0 - psi_t / (psi_t + psi_1t)).epsilon(1e-14));

  const double h = 1e-3;
  for (double d : {0.1, 0.3, 0.49 - h, 0.76 + h, 1.2}) {
    const Point x{d, 0, 0};
    const Point g = cutoff_gradient(x, {}, 2);
    CHECK(g[0] == 0.0);
    CHECK(g[1] == 0.0);
    CHECK((cutoff_phi({d + h, 0, 0}, {}, 2) - cutoff_phi({d - h, 0, 0}, {}, 2)) == 0.0);
  }
  for (double d : {0.52, 0.6, 0.7}) {
    const double fd = (cutoff_profile(d + 1e-6) - cutoff_profile(d - 1e-6)) / 2e-6;
    CHECK(cutoff_profile_derivative(d) == doctest::Approx(fd).epsilon(1e-6));
    CHECK(cutoff_profile_derivative(d) < 0.0);
  }
}

TEST_CASE("error integral E") {
  CHECK(error_integral_E(0.0, 1, 0.0) == 0.0);
  CHECK(error_integral_E(0.3, 1, 0.0) > error_integral_E(0.2, 1, 0.0));
  // Substituting w = 1/(16 s^2) gives E(r) = 2 sqrt(pi) erfc(1/(4r)) for n = 1, beta = 0.
  CHECK(error_integral_E(0.25, 1, 0.0) == doctest::Approx(2 * std::sqrt(kPi) * std::erfc(1.0)).epsilon(1e-10));
  CHECK(error_integral_E(0.25, 1, 0.0) == doctest::Approx(0.5576111705613239).epsilon(1e-12));
  const double r = 0.4, a = 1.0 / (4 * r);
  // n = 2, beta = 1/2: E = 32 Gamma(3/2, a^2) with Gamma(3/2, x) = sqrt(x) e^{-x} + sqrt(pi)/2 erfc(sqrt x).
  const double gamma32 = a * std::exp(-a * a) + 0.5 * std::sqrt(kPi) * std::erfc(a);
  CHECK(error_integral_E(r, 2, 0.5) == doctest::Approx(32.0 * gamma32).epsilon(1e-10));
}
