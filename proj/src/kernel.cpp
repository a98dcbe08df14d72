#include "monotone/kernel.hpp"

#include <boost/math/special_functions/gamma.hpp>
#include <cmath>
#include <numbers>

#include "monotone/error.hpp"

namespace monotone {

const char* convention_name(KernelConvention c) {
  return c == KernelConvention::Literal ? "literal" : "signed_abs_exponent";
}

KernelConvention convention_from_name(const std::string& name) {
  if (name == "signed_abs_exponent") return KernelConvention::SignedAbsExponent;
  if (name == "literal") return KernelConvention::Literal;
  throw ArgumentError("unknown kernel convention '" + name + "' (signed_abs_exponent | literal)");
}

const char* side_name(Side s) { return s == Side::Minus ? "minus" : "plus"; }

Side side_from_name(const std::string& name) {
  if (name == "minus") return Side::Minus;
  if (name == "plus") return Side::Plus;
  throw ArgumentError("unknown side '" + name + "' (minus | plus)");
}

namespace {

struct KernelParts {
  double s;        // t0 - t
  double s_exp;    // denominator scale in the exponent
  double r2;
  double value;
};

KernelParts kernel_parts(double t, const Point& x, double t0, const Point& x0, int n, KernelConvention conv) {
  const double s = t0 - t;
  if (s == 0.0) throw SingularTimeError("backward heat kernel evaluated at its singular time t = t0");
  const double s_exp = conv == KernelConvention::Literal ? s : std::abs(s);
  double r2 = 0.0;
  for (int d = 0; d < n; ++d) r2 += (x[d] - x0[d]) * (x[d] - x0[d]);
  const double a = 4.0 * std::numbers::pi * s;
  const double value = a * std::pow(std::abs(a), -0.5 * n - 1.0) * std::exp(-r2 / (4.0 * s_exp));
  return {s, s_exp, r2, value};
}

}  // namespace

double backward_heat_kernel(double t, const Point& x, double t0, const Point& x0, int n, KernelConvention conv) {
  return kernel_parts(t, x, t0, x0, n, conv).value;
}

Point backward_heat_kernel_gradient(double t, const Point& x, double t0, const Point& x0, int n,
                                    KernelConvention conv) {
  const KernelParts k = kernel_parts(t, x, t0, x0, n, conv);
  Point g{};
  for (int d = 0; d < n; ++d) g[d] = -(x[d] - x0[d]) * k.value / (2.0 * k.s_exp);
  return g;
}

double backward_heat_kernel_dt(double t, const Point& x, double t0, const Point& x0, int n, KernelConvention conv) {
  const KernelParts k = kernel_parts(t, x, t0, x0, n, conv);
  const double ds_exp = conv == KernelConvention::Literal ? 1.0 : (k.s > 0.0 ? 1.0 : -1.0);
  const double d_ds = k.value * (-0.5 * n / k.s + k.r2 / (4.0 * k.s_exp * k.s_exp) * ds_exp);
  return -d_ds;
}

std::pair<double, double> layer_interval(double T, double r, Side side) {
  if (!(r > 0.0)) throw ArgumentError("layer radius must be positive");
  if (side == Side::Minus) return {T - 4.0 * r * r, T - r * r};
  return {T + r * r, T + 4.0 * r * r};
}

LayerRegion region_of(const SpaceTimeSampler& s) {
  LayerRegion reg;
  reg.dim = s.dim();
  reg.t_min = s.t_min();
  reg.t_max = s.t_max();
  reg.max_ball_radius = [&s](const Point& x0) { return s.max_ball_radius(x0); };
  reg.time_breaks = [&s](double a, double b) { return s.time_breaks(a, b); };
  return reg;
}

LayerIntegrator::LayerIntegrator(int dim, const QuadratureConfig& qcfg, const LayerConfig& lcfg)
    : quad_(dim, qcfg), cfg_(lcfg), time_rule_(lcfg.time_points) {
  if (lcfg.analytic_panels < 1) throw ArgumentError("analytic_panels must be positive");
  if (!(lcfg.tail_epsilon > 0.0 && lcfg.tail_epsilon < 1.0)) throw ArgumentError("tail_epsilon must lie in (0, 1)");
}

void LayerIntegrator::check_layer(const LayerRegion& region, double a, double b) const {
  const double slack = 1e-12 * std::max(1.0, std::abs(b - a));
  if (a < region.t_min - slack || b > region.t_max + slack) {
    throw OutOfDomainError("layer (" + std::to_string(a) + ", " + std::to_string(b) +
                           ") leaves the time range (" + std::to_string(region.t_min) + ", " +
                           std::to_string(region.t_max) + ")");
  }
}

double LayerIntegrator::tail_mass(int n, double s, double radius, double support, bool plus) const {
  if (radius >= support) return 0.0;
  if (plus && cfg_.convention == KernelConvention::Literal) return INFINITY;
  return boost::math::gamma_q(0.5 * n, radius * radius / (4.0 * s));
}

LayerIntegral layer_gaussian_integral(const SpaceTimeScalar& g, double T, const Point& x0, double r, Side side,
                                      const LayerIntegrator& integrator) {
  LayerIntegral out;
  const LayerTail tail = integrator.for_each_node(
      g.region, T, x0, r, side, INFINITY,
      [&](double t, const Point& p, double w, double G) { out.value += w * G * g.value(t, p); });
  out.tail_bound = tail.tail_bound;
  out.truncation_warning = tail.warning;
  return out;
}

}  // namespace monotone
