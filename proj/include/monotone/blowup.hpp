#pragma once

#include <memory>
#include <string>
#include <vector>

#include "monotone/field.hpp"
#include "monotone/grid.hpp"
#include "monotone/kernel.hpp"
#include "monotone/model.hpp"
#include "monotone/quadrature.hpp"
#include "monotone/sampler.hpp"

namespace monotone {

struct BlowupOptions {
  double r_in = 0.1;   // elliptic probe window: annulus r_in <= |x| <= r_out
  double r_out = 1.0;
  double t_lo = -4.0;  // parabolic probe window: [t_lo, t_hi] x {|x| <= x_radius}
  double t_hi = -1.0;
  double x_radius = 2.0;
  int degree_radii = 8;
  int time_panels = 8;
  QuadratureConfig quadrature{256, 32, 64, 48, 1};
  LayerConfig layer;
  double growth_limit = 1e3;      // growth precheck: sup over scales / value at the largest scale
  double degenerate_slope = 0.5;  // norms vanishing at least like rho^slope flag a degenerate limit
};

/// Materialized blow-up rho^{-beta} u(x0 + rho x) on the probe grid.
Field rescale_elliptic(const FieldSampler& u, const Point& x0, double rho, double beta, const CartesianGrid& probe);
/// Materialized parabolic blow-up rho^{-beta} u(T + rho^2 t, x0 + rho x) on the probe grid.
SpaceTimeField rescale_parabolic(const SpaceTimeSampler& u, double T, const Point& x0, double rho, double beta,
                                 const SpaceTimeGrid& probe);

/// int_{r_in < |x-x0| < r_out} 2 |x-x0|^{-n-2beta} |grad u.(x-x0) - beta u|^2.
double homogeneity_residual(const FieldSampler& u, const Point& x0, double beta, double r_in, double r_out,
                            const QuadratureConfig& cfg = {});

/// int over the probe window of (grad u.x + 2t u_t - beta u)^2 G / (-t), centered at (0, 0).
double parabolic_homogeneity_residual(const SpaceTimeSampler& u, double beta, const BlowupOptions& opt = {});

struct DegreeFit {
  double beta = 0.0;
  double intercept = 0.0;
  double rms_residual = 0.0;  // of the log-log fit
};

/// Least-squares slope of log sqrt(sphere mean of |u|^2) against log r.
DegreeFit estimate_degree(const FieldSampler& u, const Point& x0, const std::vector<double>& radii,
                          const QuadratureConfig& cfg = {});
/// Slope of log sqrt(window mean of |u(lambda^2 t, lambda x)|^2) against log lambda, centered at (0, 0).
DegreeFit estimate_degree_parabolic(const SpaceTimeSampler& u, const std::vector<double>& lambdas,
                                    const BlowupOptions& opt = {});

struct BlowupScale {
  double rho = 0.0;
  double l2_norm = 0.0;
  double grad_norm = 0.0;
  double h1_norm = 0.0;
  double residual = 0.0;
  double degree = 0.0;
  double cauchy = 0.0;  // L2 distance on the window to the previous scale (0 for the first)
  double functional = 0.0;  // Phi (or Psi^-) of the original field at radius rho
  double growth = 0.0;      // growth-estimate quantity at radius rho
};

struct BlowupReport {
  bool parabolic = false;
  int dim = 1;
  Point x0{};
  double T = 0.0;
  double beta = 0.0;
  std::vector<BlowupScale> scales;  // rho strictly decreasing
  bool growth_ok = true;
  std::string warning;
  double norm_slope = 0.0;  // slope of log h1_norm against log rho
  bool degenerate = false;
  double limit_M = 0.0;
  bool residual_decreasing = false;
};

BlowupReport blowup_study(std::shared_ptr<const FieldSampler> u, const Model& model, const Point& x0, double beta,
                          const std::vector<double>& rhos, const BlowupOptions& opt = {});
BlowupReport blowup_study(std::shared_ptr<const SpaceTimeSampler> u, const Model& model, double T, const Point& x0,
                          double beta, const std::vector<double>& rhos, const BlowupOptions& opt = {});

/// Logarithmically spaced values from hi down to lo.
std::vector<double> log_radii(double lo, double hi, int count);

}  // namespace monotone
