#include "monotone/cutoff.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>

#include "monotone/error.hpp"

namespace monotone {

namespace {

double psi(double s) { return s > 0.0 ? std::exp(-1.0 / s) : 0.0; }
double psi_prime(double s) { return s > 0.0 ? std::exp(-1.0 / s) / (s * s) : 0.0; }

}  // namespace

double cutoff_profile(double d) {
  if (d <= 0.5) return 1.0;
  if (d >= 0.75) return 0.0;
  const double t = (d - 0.5) / 0.25;
  const double a = psi(t), b = psi(1.0 - t);
  return 1.0 - a / (a + b);
}

double cutoff_profile_derivative(double d) {
  if (d <= 0.5 || d >= 0.75) return 0.0;
  const double t = (d - 0.5) / 0.25;
  const double a = psi(t), b = psi(1.0 - t);
  const double da = psi_prime(t), db = -psi_prime(1.0 - t);
  const double ds = (da * (a + b) - a * (da + db)) / ((a + b) * (a + b));
  return -ds / 0.25;
}

double cutoff_phi(const Point& x, const Point& x0, int n) { return cutoff_profile(distance(x, x0, n)); }

Point cutoff_gradient(const Point& x, const Point& x0, int n) {
  Point g{};
  const double d = distance(x, x0, n);
  const double dp = cutoff_profile_derivative(d);
  if (dp == 0.0) return g;
  for (int k = 0; k < n; ++k) g[k] = dp * (x[k] - x0[k]) / d;
  return g;
}

double error_integral_E(double r, int n, double beta, double underflow) {
  if (!(r >= 0.0)) throw ArgumentError("E(r) needs r >= 0");
  if (r == 0.0) return 0.0;
  const double k = n + 2.0 * beta + 1.0;
  const auto log_g = [k](double s) { return -k * std::log(s) - 1.0 / (16.0 * s * s); };
  const double target = std::log(underflow);
  // log g increases on (0, s_peak]; find where it crosses the underflow level
  const double s_peak = k > 0.0 ? 1.0 / std::sqrt(8.0 * k) : INFINITY;
  const double hi0 = std::min(r, s_peak);
  if (log_g(hi0) <= target) return 0.0;
  double lo = 1e-6, hi = hi0;
  if (log_g(lo) > target) {
    lo = 0.0;
  } else {
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (lo + hi);
      (log_g(mid) > target ? hi : lo) = mid;
    }
  }
  const double s_min = lo;
  const auto g = [&](double s) { return s > 0.0 ? std::exp(log_g(s)) : 0.0; };
  return boost::math::quadrature::gauss_kronrod<double, 15>::integrate(g, s_min, r, 12, 1e-13);
}

}  // namespace monotone
