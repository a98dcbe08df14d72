#include "monotone/parabolic.hpp"

#include <algorithm>
#include <cmath>

#include "monotone/cutoff.hpp"
#include "monotone/error.hpp"
#include "monotone/format.hpp"
#include "monotone/parallel.hpp"

namespace monotone {

namespace {

struct Weighting {
  bool cutoff = false;
  const CoincidenceSet* chi = nullptr;
};

// Raw layer integrals (before the powers of r).
struct LayerSums {
  double energy = 0.0, u2 = 0.0, interior = 0.0, residual = 0.0, cutoff = 0.0;
  double ibp_lhs = 0.0, ibp_rhs = 0.0;
  double abs_energy = 0.0, abs_u2 = 0.0, abs_interior = 0.0, abs_ibp = 0.0;
  LayerTail tail;
};

void check_inputs(const SpaceTimeSampler& u, const Model& model) {
  if (u.components() != model.components()) {
    throw ArgumentError("field has " + std::to_string(u.components()) + " components but model " + model.name() +
                        " expects " + std::to_string(model.components()));
  }
}

LayerSums layer_sums(const SpaceTimeSampler& u, const Model& model, double T, const Point& x0, double beta, double r,
                     Side side, const ParabolicOptions& opt, const Weighting& wt) {
  check_inputs(u, model);
  require_psi_radius(u, T, r, side);
  const int n = u.dim();
  const int m = u.components();
  const LayerIntegrator integrator(n, opt.quadrature, opt.layer);
  const LayerRegion region = region_of(u);
  const double support = wt.cutoff ? 0.75 : INFINITY;
  LayerSums s;
  SpaceTimeJet j;
  j.m = m;
  s.tail = integrator.for_each_node(region, T, x0, r, side, support, [&](double t, const Point& x, double w,
                                                                          double G) {
    u.sample(t, x, j);
    const double tau = T - t;
    Point y{};
    for (int d = 0; d < n; ++d) y[d] = x[d] - x0[d];
    const double phi = wt.cutoff ? cutoff_phi(x, x0, n) : 1.0;
    const double chi = wt.chi ? wt.chi->omega_fraction(t, x) : 1.0;
    const double F = model.F(j.u.data());
    double fu[kMaxComponents];
    model.f(j.u.data(), fu);
    const double g2 = j.grad_squared(n);
    const double u2 = j.u_squared();
    double uf = 0.0, res = 0.0, u_ut = 0.0, u_f = 0.0;
    for (int c = 0; c < m; ++c) {
      uf += j.u[c] * fu[c];
      const double e = dot(j.grad[c], y, n) - 2.0 * tau * j.u_t[c] - beta * j.u[c];
      res += e * e;
      u_ut += j.u[c] * j.u_t[c];
      u_f += j.u[c] * chi * fu[c];
    }
    const double e = g2 - 2.0 * chi * F;
    const double wG = w * G * phi;
    s.energy += wG * e;
    s.u2 += wG * u2 / tau;
    const double inner = chi * (2.0 * (beta - 1.0) * F - beta * uf);
    s.interior += wG * inner;
    s.residual += wG * res / tau;
    s.abs_energy += std::abs(wG) * (g2 + 2.0 * std::abs(chi * F));
    s.abs_u2 += std::abs(wG * u2 / tau);
    s.abs_interior += std::abs(wG * inner);

    const Point gradG = backward_heat_kernel_gradient(t, x, T, x0, n, opt.layer.convention);
    double u_grad_gradG = 0.0;
    for (int c = 0; c < m; ++c) u_grad_gradG += j.u[c] * dot(j.grad[c], gradG, n);
    double rhs = -(w * phi * u_grad_gradG + wG * (u_ut - u_f));
    if (wt.cutoff) {
      const Point gphi = cutoff_gradient(x, x0, n);
      double u_gphi_gu = 0.0, gu_gphi_gu_y = 0.0, ut_gu_gphi = 0.0;
      for (int c = 0; c < m; ++c) {
        const double gu_gphi = dot(j.grad[c], gphi, n);
        u_gphi_gu += j.u[c] * gu_gphi;
        gu_gphi_gu_y += gu_gphi * dot(j.grad[c], y, n);
        ut_gu_gphi += j.u_t[c] * gu_gphi;
      }
      rhs -= w * G * u_gphi_gu;
      const double tt = t - T;
      const double y_gphi = dot(y, gphi, n);
      s.cutoff += w * G *
                  (2.0 * beta * u_gphi_gu + e * y_gphi - 2.0 * gu_gphi_gu_y - 4.0 * tt * ut_gu_gphi +
                   0.5 * beta * u2 / tt * y_gphi);
    }
    s.ibp_lhs += wG * g2;
    s.ibp_rhs += rhs;
    s.abs_ibp += std::abs(wG) * g2 + std::abs(rhs);
  });
  return s;
}

PsiValue make_value(const LayerSums& s, double beta, double r) {
  PsiValue v;
  v.r = r;
  const double scale = std::pow(r, -2.0 * beta);
  v.energy_term = scale * s.energy;
  v.u2_term = 0.5 * beta * scale * s.u2;
  v.psi = v.energy_term - v.u2_term;
  v.tail_bound = s.tail.tail_bound;
  v.truncation_warning = s.tail.warning;
  return v;
}

PsiDerivative make_derivative(const LayerSums& s, double beta, double r) {
  PsiDerivative d;
  const double scale = std::pow(r, -2.0 * beta - 1.0);
  d.interior_part = 2.0 * scale * s.interior;
  d.residual_part = scale * s.residual;
  d.cutoff_part = scale * s.cutoff;
  d.tail_bound = s.tail.tail_bound;
  return d;
}

struct IntegratedDerivative {
  double value = 0.0;
  double half = 0.0;
};

IntegratedDerivative integrate_derivative(const SpaceTimeSampler& u, const Model& model, double T, const Point& x0,
                                          double beta, double a, double b, Side side, const ParabolicOptions& opt,
                                          const Weighting& wt) {
  IntegratedDerivative out;
  const int count = std::max(2, opt.n_quad_r);
  for (int pass = 0; pass < 2; ++pass) {
    const GaussLegendre gl(pass == 0 ? count : std::max(1, count / 2));
    double sum = 0.0;
    for (int i = 0; i < gl.size(); ++i) {
      const double r = 0.5 * (a + b) + 0.5 * (b - a) * gl.nodes[i];
      const PsiDerivative d = make_derivative(layer_sums(u, model, T, x0, beta, r, side, opt, wt), beta, r);
      sum += 0.5 * (b - a) * gl.weights[i] * (d.interior_part + d.residual_part + d.cutoff_part);
    }
    (pass == 0 ? out.value : out.half) = sum;
  }
  return out;
}

double envelope_rate(int n, double beta, double r) {
  return std::pow(r, -n - 2.0 * beta - 1.0) * std::exp(-1.0 / (16.0 * r * r));
}

}  // namespace

double psi_radius_limit(const SpaceTimeSampler& u, double T, Side side) {
  const double span = side == Side::Minus ? T - u.t_min() : u.t_max() - T;
  if (!(span > 0.0)) return 0.0;
  return 0.5 * std::sqrt(span);
}

void require_psi_radius(const SpaceTimeSampler& u, double T, double r, Side side) {
  const double limit = psi_radius_limit(u, T, side);
  if (!(r > 0.0) || !(r < limit * (1.0 + 1e-12))) {
    throw OutOfDomainError(std::string("radius ") + format_double(r) + " outside the valid interval (0, " +
                           format_double(limit) + ") for the " + side_name(side) + " side at T=" + format_double(T));
  }
}

double parabolic_h2(const SpaceTimeSampler& u, const ParabolicOptions& opt) {
  const double h = u.resolution();
  const double dt = u.time_step();
  return std::max(h * h + dt * dt, opt.discretization_floor);
}

PsiValue psi(const SpaceTimeSampler& u, const Model& model, double T, const Point& x0, double beta, double r,
             Side side, const ParabolicOptions& opt) {
  return make_value(layer_sums(u, model, T, x0, beta, r, side, opt, {}), beta, r);
}

PsiDerivative psi_derivative_decomposition(const SpaceTimeSampler& u, const Model& model, double T,
                                           const Point& x0, double beta, double r, Side side,
                                           const ParabolicOptions& opt) {
  return make_derivative(layer_sums(u, model, T, x0, beta, r, side, opt, {}), beta, r);
}

IdentityReport parabolic_ibp_residual(const SpaceTimeSampler& u, const Model& model, double T, const Point& x0,
                                      double r, Side side, const ParabolicOptions& opt) {
  const LayerSums s = layer_sums(u, model, T, x0, 0.0, r, side, opt, {});
  IdentityReport rep;
  rep.identity = "parabolic_ibp";
  rep.radii = {r};
  rep.lhs = s.ibp_lhs;
  rep.rhs = s.ibp_rhs;
  rep.residual = std::abs(rep.lhs - rep.rhs);
  rep.scale = std::max(1.0, s.abs_ibp);
  rep.tolerance = opt.tol_factor * (parabolic_h2(u, opt) + s.tail.tail_bound) * rep.scale;
  rep.pass = rep.residual <= rep.tolerance;
  return rep;
}

IdentityReport verify_monotonicity_parabolic(const SpaceTimeSampler& u, const Model& model, double T,
                                             const Point& x0, double beta, double rho, double sigma, Side side,
                                             const ParabolicOptions& opt, bool gate) {
  if (!(rho > 0.0) || !(sigma >= rho)) {
    throw ArgumentError("need 0 < rho <= sigma, got rho=" + format_double(rho) + " sigma=" + format_double(sigma));
  }
  require_psi_radius(u, T, sigma, side);
  IdentityReport rep;
  rep.identity = "monotonicity_parabolic";
  rep.radii = {rho, sigma};
  if (sigma == rho) {
    rep.tolerance = opt.tol_factor * parabolic_h2(u, opt);
    rep.pass = true;
    return rep;
  }
  if (gate) {
    const IdentityReport ibp = parabolic_ibp_residual(u, model, T, x0, sigma, side, opt);
    if (!ibp.pass) {
      throw HypothesisError("field-not-solution: parabolic integration-by-parts residual " +
                            format_double(ibp.residual) + " exceeds " + format_double(ibp.tolerance) +
                            " at r=" + format_double(sigma));
    }
  }
  const LayerSums lo = layer_sums(u, model, T, x0, beta, rho, side, opt, {});
  const LayerSums hi = layer_sums(u, model, T, x0, beta, sigma, side, opt, {});
  const PsiValue vlo = make_value(lo, beta, rho), vhi = make_value(hi, beta, sigma);
  const IntegratedDerivative q = integrate_derivative(u, model, T, x0, beta, rho, sigma, side, opt, {});
  rep.lhs = vhi.psi - vlo.psi;
  rep.rhs = q.value;
  rep.residual = std::abs(rep.lhs - rep.rhs);
  rep.quadrature_error = std::abs(q.value - q.half);
  rep.scale = std::max({1.0, std::abs(vhi.psi), std::abs(vlo.psi)});
  const double tail = std::max(vlo.tail_bound, vhi.tail_bound);
  rep.tolerance = opt.tol_factor * (parabolic_h2(u, opt) + tail + rep.quadrature_error) * rep.scale;
  rep.pass = rep.residual <= rep.tolerance;
  return rep;
}

Admissibility beta_admissible_parabolic(const SpaceTimeSampler& u, const Model& model, double T, const Point& x0,
                                        double beta, double r, Side side, const ParabolicOptions& opt) {
  const LayerSums s = layer_sums(u, model, T, x0, beta, r, side, opt, {});
  Admissibility a;
  a.margin = s.interior;
  a.tolerance = opt.tol_factor * (parabolic_h2(u, opt) + s.tail.tail_bound) * std::max(1.0, s.abs_interior);
  a.admissible = a.margin >= -a.tolerance;
  return a;
}

FreeBoundaryPsi psi_free_boundary(const SpaceTimeSampler& u, const Model& model, const CoincidenceSet& chi,
                                  double T, const Point& x0, double beta, double r, Side side, double C,
                                  const ParabolicOptions& opt) {
  if (!(C >= 0.0)) throw ArgumentError("envelope constant C must be nonnegative, got " + format_double(C));
  if (!chi.contains(T, x0)) {
    throw HypothesisError("center (T=" + format_double(T) + ", x0) is not in the coincidence set");
  }
  const int n = u.dim();
  const LayerSums s = layer_sums(u, model, T, x0, beta, r, side, opt, {true, &chi});
  FreeBoundaryPsi out;
  out.value = make_value(s, beta, r);
  out.E_r = error_integral_E(r, n, beta);
  out.C = C;
  out.total = out.value.psi + C * out.E_r;
  out.cutoff_part = make_derivative(s, beta, r).cutoff_part;
  out.cutoff_bound = C * envelope_rate(n, beta, r);
  return out;
}

PsiValue psi_cutoff(const SpaceTimeSampler& u, const Model& model, const CoincidenceSet* chi, double T,
                    const Point& x0, double beta, double r, Side side, const ParabolicOptions& opt) {
  return make_value(layer_sums(u, model, T, x0, beta, r, side, opt, {true, chi}), beta, r);
}

PsiDerivative psi_free_boundary_derivative(const SpaceTimeSampler& u, const Model& model, const CoincidenceSet* chi,
                                           double T, const Point& x0, double beta, double r, Side side,
                                           const ParabolicOptions& opt) {
  return make_derivative(layer_sums(u, model, T, x0, beta, r, side, opt, {true, chi}), beta, r);
}

CalibrationReport calibrate_C(const SpaceTimeSampler& u, const Model& model, const CoincidenceSet* chi, double T,
                              const Point& x0, double beta, Side side, const std::vector<double>& radii,
                              const ParabolicOptions& opt) {
  check_inputs(u, model);
  const int n = u.dim();
  const int m = u.components();
  require_radius(u.max_ball_radius(x0), 0.75, "cutoff support");
  const double a = side == Side::Minus ? T - 1.0 : T;
  const double b = side == Side::Minus ? T : T + 1.0;
  if (a < u.t_min() - 1e-12 || b > u.t_max() + 1e-12) {
    throw OutOfDomainError("calibration window [" + format_double(a) + ", " + format_double(b) +
                           "] leaves the time range of the field");
  }
  const Quadrature quad(n, opt.quadrature);
  std::vector<double> cuts{a};
  for (double t : u.time_breaks(a, b)) cuts.push_back(t);
  if (cuts.size() == 1) {
    for (int k = 1; k < opt.layer.analytic_panels; ++k) cuts.push_back(a + (b - a) * k / opt.layer.analytic_panels);
  }
  cuts.push_back(b);
  const GaussLegendre rule(opt.layer.time_points);
  CalibrationReport rep;
  SpaceTimeJet j;
  j.m = m;
  for (std::size_t seg = 0; seg + 1 < cuts.size(); ++seg) {
    const double ta = cuts[seg], tb = cuts[seg + 1];
    for (int i = 0; i < rule.size(); ++i) {
      const double t = ta + 0.5 * (tb - ta) * (rule.nodes[i] + 1.0);
      const double wt = 0.5 * (tb - ta) * rule.weights[i];
      const double tt = t - T;
      quad.for_each_shell_node(x0, 0.5, 0.75, [&](const Point& x, double, double w) {
        u.sample(t, x, j);
        Point y{};
        for (int d = 0; d < n; ++d) y[d] = x[d] - x0[d];
        const Point gphi = cutoff_gradient(x, x0, n);
        const double chi_v = chi ? chi->omega_fraction(t, x) : 1.0;
        const double e = j.grad_squared(n) - 2.0 * chi_v * model.F(j.u.data());
        const double y_gphi = dot(y, gphi, n);
        double u_gphi_gu = 0.0, gu_gphi_gu_y = 0.0, ut_gu_gphi = 0.0;
        for (int c = 0; c < m; ++c) {
          const double gu_gphi = dot(j.grad[c], gphi, n);
          u_gphi_gu += j.u[c] * gu_gphi;
          gu_gphi_gu_y += gu_gphi * dot(j.grad[c], y, n);
          ut_gu_gphi += j.u_t[c] * gu_gphi;
        }
        const double h1 = std::abs(2.0 * beta * u_gphi_gu) + std::abs(e * y_gphi) + std::abs(2.0 * gu_gphi_gu_y) +
                          std::abs(4.0 * tt * ut_gu_gphi);
        const double h2 = std::abs(0.5 * beta * j.u_squared() * y_gphi);
        rep.h1_norm += wt * w * h1;
        rep.h2_norm += wt * w * h2;
      });
    }
  }
  std::vector<double> ratios(radii.size(), 0.0);
  parallel_for(radii.size(), [&](std::size_t k) {
    const double r = radii[k];
    const PsiDerivative d = psi_free_boundary_derivative(u, model, chi, T, x0, beta, r, side, opt);
    ratios[k] = std::abs(d.cutoff_part) / envelope_rate(n, beta, r);
  });
  for (double v : ratios) rep.sup_ratio = std::max(rep.sup_ratio, v);
  rep.C = std::max({rep.h1_norm, rep.h2_norm, rep.sup_ratio});
  return rep;
}

ParabolicFunctionalReport psi_scan(const SpaceTimeSampler& u, const Model& model, double T, const Point& x0,
                                   double beta, Side side, double r_min, double r_max, int n_r,
                                   const ParabolicOptions& opt, const CoincidenceSet* chi, double C) {
  if (n_r < 2 || !(r_min > 0.0) || !(r_max > r_min)) {
    throw ArgumentError("scan needs n_r >= 2 and 0 < r_min < r_max");
  }
  require_psi_radius(u, T, r_max, side);
  const bool fb = chi != nullptr;
  if (fb && !chi->contains(T, x0)) {
    throw HypothesisError("center (T=" + format_double(T) + ", x0) is not in the coincidence set");
  }
  const Weighting wt{fb, chi};
  const std::vector<double> radii = linspace(r_min, r_max, n_r);
  const int n = u.dim();

  ParabolicFunctionalReport rep;
  rep.T = T;
  rep.x0 = x0;
  rep.dim = n;
  rep.beta = beta;
  rep.side = side;
  rep.free_boundary = fb;
  rep.C = C;
  rep.h = u.resolution();
  rep.dt = u.time_step();
  rep.rows.resize(radii.size());
  std::vector<double> margin_tol(radii.size());
  parallel_for(radii.size(), [&](std::size_t k) {
    const double r = radii[k];
    const LayerSums s = layer_sums(u, model, T, x0, beta, r, side, opt, wt);
    const PsiValue v = make_value(s, beta, r);
    const PsiDerivative d = make_derivative(s, beta, r);
    PsiScanRow& row = rep.rows[k];
    row.r = r;
    row.psi = v.psi;
    row.energy_term = v.energy_term;
    row.u2_term = v.u2_term;
    row.dpsi_res = d.residual_part;
    row.dpsi_int = d.interior_part;
    row.dpsi_cut = d.cutoff_part;
    row.c23_margin = s.interior;
    margin_tol[k] = opt.tol_factor * (parabolic_h2(u, opt) + s.tail.tail_bound) * std::max(1.0, s.abs_interior);
    row.admissible = row.c23_margin >= -margin_tol[k];
    row.trunc_bound = v.tail_bound;
    row.E_r = fb ? error_integral_E(r, n, beta) : 0.0;
    row.total = row.psi + C * row.E_r;
  });

  const double h2 = parabolic_h2(u, opt);
  rep.min_residual_part = INFINITY;
  for (std::size_t k = 0; k < rep.rows.size(); ++k) {
    const PsiScanRow& row = rep.rows[k];
    if (row.admissible) ++rep.admissible_count;
    rep.min_residual_part = std::min(rep.min_residual_part, row.dpsi_res);
    rep.max_trunc_bound = std::max(rep.max_trunc_bound, row.trunc_bound);
    if (k + 1 < rep.rows.size() && row.admissible && rep.rows[k + 1].admissible) {
      const PsiScanRow& next = rep.rows[k + 1];
      const double tail = std::max(row.trunc_bound, next.trunc_bound);
      const double tol = opt.tol_factor * (h2 + tail) * std::max({1.0, std::abs(row.total), std::abs(next.total)});
      rep.max_monotone_tolerance = std::max(rep.max_monotone_tolerance, tol);
      ++rep.monotone_checks;
      if (next.total < row.total - tol) {
        ++rep.monotone_violations;
        rep.violation_index.push_back(k);
      }
    }
  }
  rep.truncation_warning = rep.max_trunc_bound > opt.layer.truncation_tolerance;

  if (opt.check_identity) {
    std::vector<IdentityReport> pairs(radii.size() - 1);
    parallel_for(pairs.size(), [&](std::size_t k) {
      const double a = radii[k], b = radii[k + 1];
      const IntegratedDerivative q = integrate_derivative(u, model, T, x0, beta, a, b, side, opt, wt);
      IdentityReport& p = pairs[k];
      p.identity = "monotonicity_parabolic";
      p.radii = {a, b};
      p.lhs = rep.rows[k + 1].psi - rep.rows[k].psi;
      p.rhs = q.value;
      p.residual = std::abs(p.lhs - p.rhs);
      p.quadrature_error = std::abs(q.value - q.half);
      p.scale = std::max({1.0, std::abs(rep.rows[k].psi), std::abs(rep.rows[k + 1].psi)});
      const double tail = std::max(rep.rows[k].trunc_bound, rep.rows[k + 1].trunc_bound);
      p.tolerance = opt.tol_factor * (h2 + tail + p.quadrature_error) * p.scale;
      p.pass = p.residual <= p.tolerance;
    });
    for (const IdentityReport& p : pairs) {
      ++rep.identity_checks;
      if (!p.pass) ++rep.identity_failures;
      rep.max_identity_residual = std::max(rep.max_identity_residual, p.residual);
      rep.max_identity_tolerance = std::max(rep.max_identity_tolerance, p.tolerance);
    }
  }

  if (rep.rows.size() >= 3) {
    const double r3[3] = {rep.rows[0].r, rep.rows[1].r, rep.rows[2].r};
    const double v3[3] = {rep.rows[0].psi, rep.rows[1].psi, rep.rows[2].psi};
    rep.limit_M = richardson_limit(r3, v3);
  } else {
    rep.limit_M = rep.rows.front().psi;
  }
  return rep;
}

}  // namespace monotone
