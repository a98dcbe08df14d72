#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "monotone/field.hpp"
#include "monotone/sampler.hpp"

namespace monotone {

using Params = std::map<std::string, double>;

/// Angular profile g of a homogeneous field |x|^beta g(x/|x|): "one", "d1" or "d1d2".
/// Each is the restriction of a homogeneous polynomial, which gives analytic gradients.
struct AngularProfile {
  std::string name;
  int degree = 0;                              // polynomial degree k of P with g = P on the sphere
  std::function<double(const Point&)> poly;     // P(x)
  std::function<Point(const Point&)> poly_grad;  // grad P(x)
};

AngularProfile angular_profile(const std::string& name);

/// u(x) = |x-x0|^beta g((x-x0)/|x-x0|) on the grid. For beta < 0 the origin is
/// singular: nodes closer than exclusion_radius take the value on that sphere,
/// and a grid containing x0 without exclusion is rejected.
Field manufactured_homogeneous(double beta, const AngularProfile& g, const CartesianGrid& grid, const Point& x0 = {},
                               double exclusion_radius = 0.0);
std::shared_ptr<AnalyticFieldSampler> manufactured_sampler(double beta, const AngularProfile& g, int dim,
                                                           const Point& x0 = {}, double half_width = INFINITY);

/// Elliptic catalog: zero, constant{value}, linear (x_1), x1x2, linear_sin (m = 2),
/// helmholtz_sin, gl_kink{epsilon}, plateau{radius} ((|x| - radius)_+^2 / 2, zero on the ball).
std::vector<std::string> elliptic_catalog();
Field exact_field(const std::string& name, const CartesianGrid& grid, const Params& params = {});
std::shared_ptr<AnalyticFieldSampler> exact_sampler(const std::string& name, int dim, const Params& params = {},
                                                    double half_width = INFINITY);
/// Number of components of a catalog entry.
int catalog_components(const std::string& name);

/// Parabolic catalog: zero, constant{value}, caloric_linear (x_1), exp_growth{amplitude}
/// (a e^t, solves u_t - Delta u = u), caloric_quadratic{T} (|x|^2 + 2n(t-T)),
/// heat_sine (e^{-t} sin x_1).
std::vector<std::string> parabolic_catalog();
SpaceTimeField exact_spacetime(const std::string& name, const SpaceTimeGrid& grid, const Params& params = {});
std::shared_ptr<AnalyticSpaceTimeSampler> exact_spacetime_sampler(const std::string& name, int dim,
                                                                  const Params& params = {});

/// Uniform noise in [-amplitude, amplitude] from a seeded generator (negative controls).
Field noise_field(const CartesianGrid& grid, int components, std::uint64_t seed, double amplitude = 1.0);
SpaceTimeField noise_spacetime(const SpaceTimeGrid& grid, int components, std::uint64_t seed,
                               double amplitude = 1.0);

}  // namespace monotone
