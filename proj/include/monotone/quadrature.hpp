#pragma once

#include <cmath>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "monotone/types.hpp"

namespace monotone {

/// Node counts for sphere and ball rules.
struct QuadratureConfig {
  int circle_nodes = 256;  // n = 2
  int polar_nodes = 64;    // n = 3, Gauss-Legendre in cos(theta)
  int azimuth_nodes = 128; // n = 3, uniform in phi
  int radial_nodes = 64;   // Gauss-Legendre nodes per radial panel
  int radial_panels = 1;
};

/// Gauss-Legendre rule on [-1, 1].
struct GaussLegendre {
  std::vector<double> nodes;
  std::vector<double> weights;

  explicit GaussLegendre(int count);
  int size() const { return static_cast<int>(nodes.size()); }
};

/// Surface area s_n of the unit sphere in R^n (s_1 = 2 counts the two endpoints).
double unit_sphere_area(int n);

/// Directions and weights on the unit (n-1)-sphere; weights sum to s_n.
class SphereQuadrature {
 public:
  SphereQuadrature(int dim, const QuadratureConfig& cfg);

  int dim() const { return dim_; }
  int size() const { return static_cast<int>(weights_.size()); }
  const Point& direction(int j) const { return directions_[j]; }
  double weight(int j) const { return weights_[j]; }

 private:
  int dim_;
  std::vector<Point> directions_;
  std::vector<double> weights_;
};

/// Sphere rule plus radial Gauss-Legendre panels; the integration engine
/// behind every ball, sphere and shell integral in the library.
class Quadrature {
 public:
  Quadrature(int dim, const QuadratureConfig& cfg = {});

  int dim() const { return sphere_.dim(); }
  const QuadratureConfig& config() const { return cfg_; }
  const SphereQuadrature& sphere() const { return sphere_; }
  const GaussLegendre& radial() const { return radial_; }

  /// visit(point, outward unit normal, weight) for the nodes of dB_r(x0).
  template <class Visit>
  void for_each_sphere_node(const Point& x0, double r, Visit&& visit) const {
    const int n = dim();
    const double scale = std::pow(r, n - 1);
    for (int j = 0; j < sphere_.size(); ++j) {
      const Point& d = sphere_.direction(j);
      Point p = x0;
      for (int k = 0; k < n; ++k) p[k] += r * d[k];
      visit(p, d, sphere_.weight(j) * scale);
    }
  }

  /// visit(point, radius, weight) for the nodes of the shell r_in < |x-x0| < r_out.
  template <class Visit>
  void for_each_shell_node(const Point& x0, double r_in, double r_out, Visit&& visit) const {
    const int n = dim();
    const int panels = cfg_.radial_panels;
    const double width = (r_out - r_in) / panels;
    for (int pnl = 0; pnl < panels; ++pnl) {
      const double a = r_in + pnl * width;
      for (int i = 0; i < radial_.size(); ++i) {
        const double rho = a + 0.5 * width * (radial_.nodes[i] + 1.0);
        const double wr = 0.5 * width * radial_.weights[i] * std::pow(rho, n - 1);
        for (int j = 0; j < sphere_.size(); ++j) {
          const Point& d = sphere_.direction(j);
          Point p = x0;
          for (int k = 0; k < n; ++k) p[k] += rho * d[k];
          visit(p, rho, wr * sphere_.weight(j));
        }
      }
    }
  }

  template <class Visit>
  void for_each_ball_node(const Point& x0, double r, Visit&& visit) const {
    for_each_shell_node(x0, 0.0, r, std::forward<Visit>(visit));
  }

 private:
  QuadratureConfig cfg_;
  SphereQuadrature sphere_;
  GaussLegendre radial_;
};

/// A scalar function on R^n together with the region where it may be sampled.
struct ScalarSampler {
  int dim = 1;
  std::function<double(const Point&)> value;
  /// Radius of the largest ball around x0 inside the sampling region; empty means all of R^n.
  std::function<double(const Point&)> max_ball_radius;
};

/// Quadrature of the surface integral of g over dB_r(x0).
double sphere_integral(const ScalarSampler& g, const Point& x0, double r, const Quadrature& quad);
/// Quadrature of the volume integral of g over B_r(x0).
double ball_integral(const ScalarSampler& g, const Point& x0, double r, const Quadrature& quad);
/// Quadrature over the shell r_in < |x-x0| < r_out.
double shell_integral(const ScalarSampler& g, const Point& x0, double r_in, double r_out,
                      const Quadrature& quad);

/// Throws OutOfDomainError naming `what` and r when r exceeds the available radius.
void require_radius(double available, double r, const std::string& what);

}  // namespace monotone
