#include "monotone/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "monotone/error.hpp"

namespace monotone {

namespace {

// Legendre polynomial P_k(x) and its derivative by the three-term recurrence.
void legendre(int k, double x, double& p, double& dp) {
  double p0 = 1.0, p1 = x;
  for (int j = 2; j <= k; ++j) {
    const double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
    p0 = p1;
    p1 = p2;
  }
  p = p1;
  dp = k * (x * p1 - p0) / (x * x - 1.0);
}

}  // namespace

GaussLegendre::GaussLegendre(int count) {
  if (count < 1) throw ArgumentError("Gauss-Legendre rule needs at least one node");
  nodes.assign(count, 0.0);
  weights.assign(count, 0.0);
  if (count == 1) {
    weights[0] = 2.0;
    return;
  }
  for (int i = 0; i < count / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (count + 0.5));
    double p = 0.0, dp = 1.0;
    for (int it = 0; it < 100; ++it) {
      legendre(count, x, p, dp);
      const double dx = p / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    legendre(count, x, p, dp);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    nodes[i] = -x;
    nodes[count - 1 - i] = x;
    weights[i] = w;
    weights[count - 1 - i] = w;
  }
  if (count % 2 == 1) {
    double p = 0.0, dp = 1.0;
    legendre(count, 0.0, p, dp);
    weights[count / 2] = 2.0 / (dp * dp);
  }
}

double unit_sphere_area(int n) {
  return 2.0 * std::pow(std::numbers::pi, 0.5 * n) / std::tgamma(0.5 * n);
}

SphereQuadrature::SphereQuadrature(int dim, const QuadratureConfig& cfg) : dim_(dim) {
  switch (dim) {
    case 1:
      directions_ = {Point{-1.0, 0.0, 0.0}, Point{1.0, 0.0, 0.0}};
      weights_ = {1.0, 1.0};
      break;
    case 2: {
      const int m = cfg.circle_nodes;
      if (m < 1) throw ArgumentError("circle quadrature needs at least one node");
      for (int j = 0; j < m; ++j) {
        const double a = 2.0 * std::numbers::pi * (j + 0.5) / m;
        directions_.push_back(Point{std::cos(a), std::sin(a), 0.0});
        weights_.push_back(2.0 * std::numbers::pi / m);
      }
      break;
    }
    case 3: {
      if (cfg.polar_nodes < 1 || cfg.azimuth_nodes < 1) {
        throw ArgumentError("sphere quadrature needs positive polar and azimuth counts");
      }
      const GaussLegendre gl(cfg.polar_nodes);
      const int na = cfg.azimuth_nodes;
      for (int i = 0; i < gl.size(); ++i) {
        const double z = gl.nodes[i];
        const double s = std::sqrt(std::max(0.0, 1.0 - z * z));
        for (int j = 0; j < na; ++j) {
          const double a = 2.0 * std::numbers::pi * (j + 0.5) / na;
          directions_.push_back(Point{s * std::cos(a), s * std::sin(a), z});
          weights_.push_back(gl.weights[i] * 2.0 * std::numbers::pi / na);
        }
      }
      break;
    }
    default:
      throw ArgumentError("sphere quadrature is available for n = 1, 2, 3");
  }
}

Quadrature::Quadrature(int dim, const QuadratureConfig& cfg)
    : cfg_(cfg), sphere_(dim, cfg), radial_(cfg.radial_nodes) {
  if (cfg.radial_panels < 1) throw ArgumentError("radial_panels must be positive");
}

void require_radius(double available, double r, const std::string& what) {
  if (!(r <= available * (1.0 + 1e-12))) {
    std::ostringstream os;
    os.precision(17);
    os << what << " of radius " << r << " leaves the sampling region (largest admissible radius "
       << available << ")";
    throw OutOfDomainError(os.str());
  }
}

namespace {

void check_region(const ScalarSampler& g, const Point& x0, double r, const char* what) {
  if (!(r > 0.0)) throw ArgumentError(std::string(what) + " radius must be positive");
  if (g.max_ball_radius) require_radius(g.max_ball_radius(x0), r, what);
}

}  // namespace

double sphere_integral(const ScalarSampler& g, const Point& x0, double r, const Quadrature& quad) {
  check_region(g, x0, r, "sphere");
  double s = 0.0;
  quad.for_each_sphere_node(x0, r, [&](const Point& p, const Point&, double w) { s += w * g.value(p); });
  return s;
}

double ball_integral(const ScalarSampler& g, const Point& x0, double r, const Quadrature& quad) {
  check_region(g, x0, r, "ball");
  double s = 0.0;
  quad.for_each_ball_node(x0, r, [&](const Point& p, double, double w) { s += w * g.value(p); });
  return s;
}

double shell_integral(const ScalarSampler& g, const Point& x0, double r_in, double r_out,
                      const Quadrature& quad) {
  if (!(r_in >= 0.0 && r_out > r_in)) throw ArgumentError("shell needs 0 <= r_in < r_out");
  check_region(g, x0, r_out, "shell");
  double s = 0.0;
  quad.for_each_shell_node(x0, r_in, r_out, [&](const Point& p, double, double w) { s += w * g.value(p); });
  return s;
}

}  // namespace monotone
