#include "monotone/catalog.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "monotone/error.hpp"

namespace monotone {

namespace {

double param(const Params& p, const std::string& key, double fallback) {
  const auto it = p.find(key);
  return it == p.end() ? fallback : it->second;
}

using Eval = std::function<void(const Point&, Jet&)>;

struct Entry {
  int m;
  Eval eval;
};

Entry elliptic_entry(const std::string& name, int dim, const Params& params) {
  if (name == "zero") return {1, [](const Point&, Jet& j) { j.u[0] = 0.0; }};
  if (name == "constant") {
    const double v = param(params, "value", 1.0);
    return {1, [v](const Point&, Jet& j) { j.u[0] = v; }};
  }
  if (name == "linear") {
    return {1, [](const Point& x, Jet& j) {
              j.u[0] = x[0];
              j.grad[0][0] = 1.0;
            }};
  }
  if (name == "x1x2") {
    if (dim < 2) throw ArgumentError("catalog entry x1x2 needs dimension >= 2");
    return {1, [](const Point& x, Jet& j) {
              j.u[0] = x[0] * x[1];
              j.grad[0][0] = x[1];
              j.grad[0][1] = x[0];
            }};
  }
  if (name == "linear_sin") {
    return {2, [](const Point& x, Jet& j) {
              for (int c = 0; c < 2; ++c) {
                j.u[c] = std::sin(x[0]);
                j.grad[c][0] = std::cos(x[0]);
              }
            }};
  }
  if (name == "helmholtz_sin") {
    return {1, [](const Point& x, Jet& j) {
              j.u[0] = std::sin(x[0]);
              j.grad[0][0] = std::cos(x[0]);
            }};
  }
  if (name == "gl_kink") {
    const double eps = param(params, "epsilon", 1.0);
    if (!(eps > 0.0)) throw ArgumentError("gl_kink needs epsilon > 0");
    const double k = 1.0 / (std::sqrt(2.0) * eps);
    return {1, [k](const Point& x, Jet& j) {
              const double t = std::tanh(k * x[0]);
              j.u[0] = t;
              j.grad[0][0] = k * (1.0 - t * t);
            }};
  }
  if (name == "plateau") {
    const double a = param(params, "radius", 0.5);
    if (!(a >= 0.0)) throw ArgumentError("plateau needs radius >= 0");
    return {1, [a, dim](const Point& x, Jet& j) {
              double r = 0.0;
              for (int d = 0; d < dim; ++d) r += x[d] * x[d];
              r = std::sqrt(r);
              const double s = std::max(r - a, 0.0);
              j.u[0] = 0.5 * s * s;
              for (int d = 0; d < dim; ++d) j.grad[0][d] = s > 0.0 ? s * x[d] / r : 0.0;
            }};
  }
  throw ArgumentError("unknown elliptic catalog entry '" + name + "'");
}

using StEval = std::function<void(double, const Point&, SpaceTimeJet&)>;

struct StEntry {
  int m;
  StEval eval;
};

StEntry parabolic_entry(const std::string& name, int dim, const Params& params) {
  if (name == "zero") return {1, [](double, const Point&, SpaceTimeJet& j) { j.u[0] = 0.0; }};
  if (name == "constant") {
    const double v = param(params, "value", 1.0);
    return {1, [v](double, const Point&, SpaceTimeJet& j) { j.u[0] = v; }};
  }
  if (name == "caloric_linear") {
    return {1, [](double, const Point& x, SpaceTimeJet& j) {
              j.u[0] = x[0];
              j.grad[0][0] = 1.0;
            }};
  }
  if (name == "exp_growth") {
    const double a = param(params, "amplitude", 1.0);
    return {1, [a](double t, const Point&, SpaceTimeJet& j) {
              j.u[0] = a * std::exp(t);
              j.u_t[0] = j.u[0];
            }};
  }
  if (name == "caloric_quadratic") {
    const double T = param(params, "T", 0.0);
    return {1, [T, dim](double t, const Point& x, SpaceTimeJet& j) {
              double s = 0.0;
              for (int d = 0; d < dim; ++d) {
                s += x[d] * x[d];
                j.grad[0][d] = 2.0 * x[d];
              }
              j.u[0] = s + 2.0 * dim * (t - T);
              j.u_t[0] = 2.0 * dim;
            }};
  }
  if (name == "heat_sine") {
    return {1, [](double t, const Point& x, SpaceTimeJet& j) {
              const double e = std::exp(-t);
              j.u[0] = e * std::sin(x[0]);
              j.grad[0][0] = e * std::cos(x[0]);
              j.u_t[0] = -j.u[0];
            }};
  }
  throw ArgumentError("unknown parabolic catalog entry '" + name + "'");
}

}  // namespace

AngularProfile angular_profile(const std::string& name) {
  if (name == "one") {
    return {name, 0, [](const Point&) { return 1.0; }, [](const Point&) { return Point{}; }};
  }
  if (name == "d1") {
    return {name, 1, [](const Point& x) { return x[0]; }, [](const Point&) { return Point{1.0, 0.0, 0.0}; }};
  }
  if (name == "d1d2") {
    return {name, 2, [](const Point& x) { return x[0] * x[1]; },
            [](const Point& x) { return Point{x[1], x[0], 0.0}; }};
  }
  throw ArgumentError("unknown angular profile '" + name + "' (one | d1 | d1d2)");
}

namespace {

void homogeneous_jet(double beta, const AngularProfile& g, int dim, const Point& y, double r_floor, Jet& j) {
  double r = std::sqrt(dot(y, y, dim));
  Point q = y;
  if (r < r_floor) {
    // constant extension of the value on the exclusion sphere along rays
    const double s = r > 0.0 ? r_floor / r : 0.0;
    if (r == 0.0) {
      q = Point{r_floor, 0.0, 0.0};
    } else {
      for (int d = 0; d < dim; ++d) q[d] *= s;
    }
    r = r_floor;
    const double a = std::pow(r, beta - g.degree);
    j.u[0] = a * g.poly(q);
    j.grad[0] = Point{};
    return;
  }
  if (r == 0.0) {
    j.u[0] = beta > 0.0 ? 0.0 : g.poly(Point{1.0, 0.0, 0.0});
    j.grad[0] = Point{};
    return;
  }
  const double a = std::pow(r, beta - g.degree);
  const double P = g.poly(q);
  const Point dP = g.poly_grad(q);
  j.u[0] = a * P;
  for (int d = 0; d < dim; ++d) j.grad[0][d] = (beta - g.degree) * a / (r * r) * q[d] * P + a * dP[d];
}

}  // namespace

Field manufactured_homogeneous(double beta, const AngularProfile& g, const CartesianGrid& grid, const Point& x0,
                               double exclusion_radius) {
  const int n = grid.dim();
  if (g.degree >= 2 && n < 2) throw ArgumentError("profile " + g.name + " needs dimension >= 2");
  if (beta < 0.0 && exclusion_radius <= 0.0) {
    double dmin = INFINITY;
    for (int d = 0; d < n; ++d) dmin = std::min(dmin, grid.spacing(d));
    for (std::size_t i = 0; i < grid.node_count(); ++i) {
      if (distance(grid.node(i), x0, n) < 1e-12 * dmin) {
        throw ArgumentError("homogeneous field of negative degree is singular at the grid node x0; "
                            "supply an exclusion radius");
      }
    }
  }
  FieldMeta meta;
  meta.provenance = Provenance::Manufactured;
  meta.source = "homogeneous{beta=" + std::to_string(beta) + ",profile=" + g.name + "}";
  Field f(grid, 1, meta);
  Jet j;
  for (std::size_t i = 0; i < grid.node_count(); ++i) {
    Point y = grid.node(i);
    for (int d = 0; d < n; ++d) y[d] -= x0[d];
    homogeneous_jet(beta, g, n, y, exclusion_radius, j);
    f.at(i, 0) = j.u[0];
  }
  f.require_finite();
  return f;
}

std::shared_ptr<AnalyticFieldSampler> manufactured_sampler(double beta, const AngularProfile& g, int dim,
                                                           const Point& x0, double half_width) {
  return std::make_shared<AnalyticFieldSampler>(
      dim, 1,
      [=](const Point& x, Jet& j) {
        Point y = x;
        for (int d = 0; d < dim; ++d) y[d] -= x0[d];
        homogeneous_jet(beta, g, dim, y, 0.0, j);
      },
      half_width, x0);
}

std::vector<std::string> elliptic_catalog() {
  return {"zero", "constant", "linear", "x1x2", "linear_sin", "helmholtz_sin", "gl_kink", "plateau"};
}

int catalog_components(const std::string& name) { return elliptic_entry(name, 3, {}).m; }

Field exact_field(const std::string& name, const CartesianGrid& grid, const Params& params) {
  const Entry e = elliptic_entry(name, grid.dim(), params);
  FieldMeta meta;
  meta.provenance = Provenance::Exact;
  meta.source = name;
  Field f(grid, e.m, meta);
  Jet j;
  j.m = e.m;
  for (std::size_t i = 0; i < grid.node_count(); ++i) {
    e.eval(grid.node(i), j);
    for (int c = 0; c < e.m; ++c) f.at(i, c) = j.u[c];
  }
  return f;
}

std::shared_ptr<AnalyticFieldSampler> exact_sampler(const std::string& name, int dim, const Params& params,
                                                    double half_width) {
  Entry e = elliptic_entry(name, dim, params);
  return std::make_shared<AnalyticFieldSampler>(dim, e.m, std::move(e.eval), half_width);
}

std::vector<std::string> parabolic_catalog() {
  return {"zero", "constant", "caloric_linear", "exp_growth", "caloric_quadratic", "heat_sine"};
}

SpaceTimeField exact_spacetime(const std::string& name, const SpaceTimeGrid& grid, const Params& params) {
  const StEntry e = parabolic_entry(name, grid.space().dim(), params);
  FieldMeta meta;
  meta.provenance = Provenance::Exact;
  meta.source = name;
  SpaceTimeField f(grid, e.m, meta);
  SpaceTimeJet j;
  j.m = e.m;
  for (int k = 0; k < grid.slices(); ++k) {
    const double t = grid.time(k);
    Field& s = f.slice(k);
    for (std::size_t i = 0; i < grid.space().node_count(); ++i) {
      e.eval(t, grid.space().node(i), j);
      for (int c = 0; c < e.m; ++c) s.at(i, c) = j.u[c];
    }
  }
  return f;
}

std::shared_ptr<AnalyticSpaceTimeSampler> exact_spacetime_sampler(const std::string& name, int dim,
                                                                  const Params& params) {
  StEntry e = parabolic_entry(name, dim, params);
  return std::make_shared<AnalyticSpaceTimeSampler>(dim, e.m, std::move(e.eval));
}

Field noise_field(const CartesianGrid& grid, int components, std::uint64_t seed, double amplitude) {
  FieldMeta meta;
  meta.provenance = Provenance::Manufactured;
  meta.source = "noise{seed=" + std::to_string(seed) + "}";
  Field f(grid, components, meta);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(-amplitude, amplitude);
  for (double& v : f.values()) v = dist(rng);
  return f;
}

SpaceTimeField noise_spacetime(const SpaceTimeGrid& grid, int components, std::uint64_t seed, double amplitude) {
  FieldMeta meta;
  meta.provenance = Provenance::Manufactured;
  meta.source = "noise{seed=" + std::to_string(seed) + "}";
  SpaceTimeField f(grid, components, meta);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(-amplitude, amplitude);
  for (int k = 0; k < grid.slices(); ++k) {
    for (double& v : f.slice(k).values()) v = dist(rng);
  }
  return f;
}

}  // namespace monotone
