#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "monotone/quadrature.hpp"
#include "monotone/sampler.hpp"
#include "monotone/types.hpp"

namespace monotone {

/// Reading of the backward heat kernel for t > t0.
///   SignedAbsExponent: prefactor keeps its sign, exponent uses |t0 - t| (decays in x).
///   Literal: exponent -|x-x0|^2 / (4 (t0 - t)) taken as written (grows in x for t > t0).
enum class KernelConvention { SignedAbsExponent, Literal };

enum class Side { Minus, Plus };

const char* convention_name(KernelConvention c);
KernelConvention convention_from_name(const std::string& name);
const char* side_name(Side s);
Side side_from_name(const std::string& name);

/// G_{(t0,x0)}(t,x) = 4 pi (t0-t) |4 pi (t0-t)|^{-n/2-1} exp(-|x-x0|^2 / (4 (t0-t))).
double backward_heat_kernel(double t, const Point& x, double t0, const Point& x0, int n,
                            KernelConvention conv = KernelConvention::SignedAbsExponent);
/// Analytic spatial gradient of the kernel.
Point backward_heat_kernel_gradient(double t, const Point& x, double t0, const Point& x0, int n,
                                    KernelConvention conv = KernelConvention::SignedAbsExponent);
/// Analytic time derivative of the kernel.
double backward_heat_kernel_dt(double t, const Point& x, double t0, const Point& x0, int n,
                               KernelConvention conv = KernelConvention::SignedAbsExponent);

/// Time interval of the layer T_r^-(T) = (T-4r^2, T-r^2) or T_r^+(T) = (T+r^2, T+4r^2).
std::pair<double, double> layer_interval(double T, double r, Side side);

struct LayerConfig {
  int time_points = 4;          // Gauss-Legendre points per time sub-interval
  int analytic_panels = 32;     // sub-intervals when the sampler has no time breaks
  double tail_epsilon = 1e-16;  // exp(-R^2 / (4|T-t|)) at the truncation radius
  double truncation_tolerance = 1e-8;
  KernelConvention convention = KernelConvention::SignedAbsExponent;
};

/// Where a space-time integrand may be evaluated.
struct LayerRegion {
  int dim = 1;
  double t_min = -INFINITY;
  double t_max = INFINITY;
  std::function<double(const Point&)> max_ball_radius;     // empty: all of R^n
  std::function<std::vector<double>(double, double)> time_breaks;  // empty: smooth in t
};

LayerRegion region_of(const SpaceTimeSampler& s);

struct LayerTail {
  double tail_bound = 0.0;  // time integral of the kernel mass left out by truncation
  bool warning = false;
};

/// Space-time quadrature of layer integrals against G_{(T,x0)}.
class LayerIntegrator {
 public:
  LayerIntegrator(int dim, const QuadratureConfig& qcfg = {}, const LayerConfig& lcfg = {});

  const Quadrature& spatial() const { return quad_; }
  const LayerConfig& config() const { return cfg_; }

  /// visit(t, x, weight, G) over the quadrature nodes of the layer; the spatial
  /// range is |x-x0| <= min(R_cut(t), support_radius, available radius).
  template <class Visit>
  LayerTail for_each_node(const LayerRegion& region, double T, const Point& x0, double r, Side side,
                          double support_radius, Visit&& visit) const {
    const auto [a, b] = layer_interval(T, r, side);
    check_layer(region, a, b);
    const double available = region.max_ball_radius ? region.max_ball_radius(x0) : INFINITY;
    std::vector<double> cuts{a};
    if (region.time_breaks) {
      for (double t : region.time_breaks(a, b)) cuts.push_back(t);
    }
    if (cuts.size() == 1) {
      for (int k = 1; k < cfg_.analytic_panels; ++k) cuts.push_back(a + (b - a) * k / cfg_.analytic_panels);
    }
    cuts.push_back(b);
    const int n = region.dim;
    const double log_eps = -std::log(cfg_.tail_epsilon);
    LayerTail tail;
    for (std::size_t seg = 0; seg + 1 < cuts.size(); ++seg) {
      const double ta = cuts[seg], tb = cuts[seg + 1];
      if (!(tb > ta)) continue;
      for (int i = 0; i < time_rule_.size(); ++i) {
        const double t = ta + 0.5 * (tb - ta) * (time_rule_.nodes[i] + 1.0);
        const double wt = 0.5 * (tb - ta) * time_rule_.weights[i];
        const double s = std::abs(T - t);
        const double r_cut = std::sqrt(4.0 * s * log_eps);
        const double radius = std::min({r_cut, support_radius, available});
        tail.tail_bound += wt * tail_mass(n, s, radius, support_radius, t > T);
        quad_.for_each_ball_node(x0, radius, [&](const Point& p, double, double w) {
          visit(t, p, wt * w, backward_heat_kernel(t, p, T, x0, n, cfg_.convention));
        });
      }
    }
    tail.warning = tail.tail_bound > cfg_.truncation_tolerance;
    return tail;
  }

 private:
  void check_layer(const LayerRegion& region, double a, double b) const;
  double tail_mass(int n, double s, double radius, double support, bool plus) const;

  Quadrature quad_;
  LayerConfig cfg_;
  GaussLegendre time_rule_;
};

struct LayerIntegral {
  double value = 0.0;
  double tail_bound = 0.0;
  bool truncation_warning = false;
};

/// Scalar integrand on a space-time region.
struct SpaceTimeScalar {
  LayerRegion region;
  std::function<double(double, const Point&)> value;
};

/// Quadrature of the layer integral of g * G_{(T,x0)} over T_r^{side}(T).
LayerIntegral layer_gaussian_integral(const SpaceTimeScalar& g, double T, const Point& x0, double r, Side side,
                                      const LayerIntegrator& integrator);

}  // namespace monotone
