#include "monotone/elliptic.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "monotone/error.hpp"
#include "monotone/format.hpp"
#include "monotone/parallel.hpp"

namespace monotone {

namespace {

double radial_dot(const Jet& j, int c, const Point& normal, int n) {
  double s = 0.0;
  for (int d = 0; d < n; ++d) s += j.grad[c][d] * normal[d];
  return s;
}

double energy_density(const Jet& j, const Model& model, int n) { return j.grad_squared(n) - 2.0 * model.F(j.u.data()); }

double u_dot_f(const Jet& j, const Model& model) {
  double fu[kMaxComponents];
  model.f(j.u.data(), fu);
  double s = 0.0;
  for (int c = 0; c < j.m; ++c) s += j.u[c] * fu[c];
  return s;
}

void check_inputs(const FieldSampler& u, const Model& model, const Point& x0, double r, const char* what) {
  if (u.components() != model.components()) {
    throw ArgumentError("field has " + std::to_string(u.components()) + " components but model " + model.name() +
                        " expects " + std::to_string(model.components()));
  }
  if (!(r > 0.0)) throw ArgumentError(std::string(what) + ": radius must be positive, got " + format_double(r));
  require_radius(u.max_ball_radius(x0), r, what);
}

Jet make_jet(const FieldSampler& u) {
  Jet j;
  j.m = u.components();
  return j;
}

// Gauss-Legendre integral of the derivative decomposition over [a, b].
double integrate_derivative(const FieldSampler& u, const Model& model, const Point& x0, double beta, double a,
                            double b, int count, const Quadrature& quad) {
  const GaussLegendre gl(count);
  double sum = 0.0;
  for (int i = 0; i < gl.size(); ++i) {
    const double r = 0.5 * (a + b) + 0.5 * (b - a) * gl.nodes[i];
    const PhiDerivative d = phi_derivative_decomposition(u, model, x0, beta, r, quad);
    sum += 0.5 * (b - a) * gl.weights[i] * (d.boundary_part + d.interior_part);
  }
  return sum;
}

}  // namespace

double discretization_h2(const FieldSampler& u, const EllipticOptions& opt) {
  const double h = u.resolution();
  return std::max(h * h, opt.discretization_floor);
}

PhiValue phi(const FieldSampler& u, const Model& model, const Point& x0, double beta, double r,
             const Quadrature& quad) {
  check_inputs(u, model, x0, r, "Phi radius");
  const int n = u.dim();
  Jet j = make_jet(u);
  double vol = 0.0;
  quad.for_each_ball_node(x0, r, [&](const Point& p, double, double w) {
    u.sample(p, j);
    vol += w * energy_density(j, model, n);
  });
  double bdry = 0.0;
  quad.for_each_sphere_node(x0, r, [&](const Point& p, const Point&, double w) {
    u.sample(p, j);
    bdry += w * j.u_squared();
  });
  PhiValue out;
  out.r = r;
  out.vol_term = std::pow(r, 2.0 - n - 2.0 * beta) * vol;
  out.bdry_term = beta * std::pow(r, 1.0 - n - 2.0 * beta) * bdry;
  out.phi = out.vol_term - out.bdry_term;
  return out;
}

PhiDerivative phi_derivative_decomposition(const FieldSampler& u, const Model& model, const Point& x0, double beta,
                                           double r, const Quadrature& quad) {
  check_inputs(u, model, x0, r, "Phi derivative radius");
  const int n = u.dim();
  Jet j = make_jet(u);
  double bdry = 0.0;
  quad.for_each_sphere_node(x0, r, [&](const Point& p, const Point& normal, double w) {
    u.sample(p, j);
    for (int c = 0; c < j.m; ++c) {
      const double e = radial_dot(j, c, normal, n) - beta * j.u[c] / r;
      bdry += w * e * e;
    }
  });
  double inner = 0.0;
  quad.for_each_ball_node(x0, r, [&](const Point& p, double, double w) {
    u.sample(p, j);
    inner += w * model.interior_integrand(beta, j.u.data());
  });
  PhiDerivative out;
  out.boundary_part = 2.0 * std::pow(r, 2.0 - n - 2.0 * beta) * bdry;
  out.interior_part = 2.0 * std::pow(r, 1.0 - n - 2.0 * beta) * inner;
  return out;
}

IdentityReport pohozaev_residual(const FieldSampler& u, const Model& model, const Point& x0, double r,
                                 const EllipticOptions& opt) {
  check_inputs(u, model, x0, r, "Pohozaev radius");
  const Quadrature quad(u.dim(), opt.quadrature);
  const int n = u.dim();
  Jet j = make_jet(u);
  double lhs = 0.0, scale = 0.0;
  quad.for_each_ball_node(x0, r, [&](const Point& p, double, double w) {
    u.sample(p, j);
    const double g2 = j.grad_squared(n);
    const double F = model.F(j.u.data());
    lhs += w * (n * (g2 - 2.0 * F) - 2.0 * g2);
    scale += w * (std::abs(n - 2.0) * g2 + 2.0 * n * std::abs(F));
  });
  double rhs = 0.0;
  quad.for_each_sphere_node(x0, r, [&](const Point& p, const Point& normal, double w) {
    u.sample(p, j);
    const double g2 = j.grad_squared(n);
    const double F = model.F(j.u.data());
    double dn2 = 0.0;
    for (int c = 0; c < j.m; ++c) {
      const double dn = radial_dot(j, c, normal, n);
      dn2 += dn * dn;
    }
    rhs += w * r * (g2 - 2.0 * F - 2.0 * dn2);
    scale += w * r * (g2 + 2.0 * std::abs(F) + 2.0 * dn2);
  });
  IdentityReport rep;
  rep.identity = "pohozaev";
  rep.radii = {r};
  rep.lhs = lhs;
  rep.rhs = rhs;
  rep.residual = std::abs(lhs - rhs);
  rep.scale = std::max(1.0, scale);
  rep.tolerance = opt.tol_factor * discretization_h2(u, opt) * rep.scale;
  rep.pass = rep.residual <= rep.tolerance;
  return rep;
}

IdentityReport ibp_residual(const FieldSampler& u, const Model& model, const Point& x0, double r,
                            const EllipticOptions& opt) {
  check_inputs(u, model, x0, r, "integration-by-parts radius");
  const Quadrature quad(u.dim(), opt.quadrature);
  const int n = u.dim();
  Jet j = make_jet(u);
  double lhs = 0.0, vol = 0.0, scale = 0.0;
  quad.for_each_ball_node(x0, r, [&](const Point& p, double, double w) {
    u.sample(p, j);
    const double g2 = j.grad_squared(n);
    const double uf = u_dot_f(j, model);
    lhs += w * g2;
    vol += w * uf;
    scale += w * (g2 + std::abs(uf));
  });
  double surf = 0.0;
  quad.for_each_sphere_node(x0, r, [&](const Point& p, const Point& normal, double w) {
    u.sample(p, j);
    double s = 0.0;
    for (int c = 0; c < j.m; ++c) s += j.u[c] * radial_dot(j, c, normal, n);
    surf += w * s;
    scale += w * std::abs(s);
  });
  IdentityReport rep;
  rep.identity = "ibp";
  rep.radii = {r};
  rep.lhs = lhs;
  rep.rhs = surf + vol;
  rep.residual = std::abs(rep.lhs - rep.rhs);
  rep.scale = std::max(1.0, scale);
  rep.tolerance = opt.tol_factor * discretization_h2(u, opt) * rep.scale;
  rep.pass = rep.residual <= rep.tolerance;
  return rep;
}

IdentityReport verify_monotonicity_elliptic(const FieldSampler& u, const Model& model, const Point& x0, double beta,
                                            double rho, double sigma, const EllipticOptions& opt, bool gate) {
  if (!(rho > 0.0) || !(sigma >= rho)) {
    throw ArgumentError("need 0 < rho <= sigma, got rho=" + format_double(rho) + " sigma=" + format_double(sigma));
  }
  check_inputs(u, model, x0, sigma, "monotonicity radius sigma");
  if (sigma == rho) {
    IdentityReport rep;
    rep.identity = "monotonicity_elliptic";
    rep.radii = {rho, sigma};
    rep.tolerance = opt.tol_factor * discretization_h2(u, opt);
    rep.pass = true;
    return rep;
  }
  if (gate) {
    for (double r : {rho, sigma}) {
      const IdentityReport ibp = ibp_residual(u, model, x0, r, opt);
      if (!ibp.pass) {
        throw HypothesisError("field-not-solution: integration-by-parts residual " + format_double(ibp.residual) +
                              " exceeds " + format_double(ibp.tolerance) + " at r=" + format_double(r));
      }
    }
  }
  const Quadrature quad(u.dim(), opt.quadrature);
  const PhiValue lo = phi(u, model, x0, beta, rho, quad);
  const PhiValue hi = phi(u, model, x0, beta, sigma, quad);
  const int count = std::max(2, opt.n_quad_r);
  const double full = integrate_derivative(u, model, x0, beta, rho, sigma, count, quad);
  const double half = integrate_derivative(u, model, x0, beta, rho, sigma, std::max(1, count / 2), quad);

  IdentityReport rep;
  rep.identity = "monotonicity_elliptic";
  rep.radii = {rho, sigma};
  rep.lhs = hi.phi - lo.phi;
  rep.rhs = full;
  rep.residual = std::abs(rep.lhs - rep.rhs);
  rep.quadrature_error = std::abs(full - half);
  rep.scale = std::max({1.0, std::abs(hi.phi), std::abs(lo.phi)});
  rep.tolerance = opt.tol_factor * (discretization_h2(u, opt) + rep.quadrature_error) * rep.scale;
  rep.pass = rep.residual <= rep.tolerance;
  return rep;
}

Admissibility beta_admissible_elliptic(const FieldSampler& u, const Model& model, const Point& x0, double beta,
                                       double r, const EllipticOptions& opt) {
  check_inputs(u, model, x0, r, "admissibility radius");
  const Quadrature quad(u.dim(), opt.quadrature);
  Jet j = make_jet(u);
  double margin = 0.0, scale = 0.0;
  quad.for_each_ball_node(x0, r, [&](const Point& p, double, double w) {
    u.sample(p, j);
    const double v = model.interior_integrand(beta, j.u.data());
    margin += w * v;
    scale += w * std::abs(v);
  });
  Admissibility a;
  a.margin = margin;
  a.tolerance = opt.tol_factor * discretization_h2(u, opt) * std::max(1.0, scale);
  a.admissible = margin >= -a.tolerance;
  return a;
}

double richardson_limit(const double r[3], const double v[3]) {
  double out = 0.0;
  for (int i = 0; i < 3; ++i) {
    double basis = 1.0;
    for (int k = 0; k < 3; ++k) {
      if (k != i) basis *= (0.0 - r[k]) / (r[i] - r[k]);
    }
    out += basis * v[i];
  }
  return out;
}

FunctionalReport phi_scan(const FieldSampler& u, const Model& model, const Point& x0, double beta, double r_min,
                          double r_max, int n_r, const EllipticOptions& opt) {
  if (n_r < 2 || !(r_min > 0.0) || !(r_max > r_min)) {
    throw ArgumentError("scan needs n_r >= 2 and 0 < r_min < r_max");
  }
  check_inputs(u, model, x0, r_max, "scan radius r_max");
  const Quadrature quad(u.dim(), opt.quadrature);
  const std::vector<double> radii = linspace(r_min, r_max, n_r);

  FunctionalReport rep;
  rep.x0 = x0;
  rep.dim = u.dim();
  rep.beta = beta;
  rep.h = u.resolution();
  rep.rows.resize(radii.size());
  std::vector<double> margin_tol(radii.size());
  parallel_for(radii.size(), [&](std::size_t k) {
    const double r = radii[k];
    const PhiValue v = phi(u, model, x0, beta, r, quad);
    const PhiDerivative d = phi_derivative_decomposition(u, model, x0, beta, r, quad);
    const Admissibility a = beta_admissible_elliptic(u, model, x0, beta, r, opt);
    PhiScanRow& row = rep.rows[k];
    row.r = r;
    row.phi = v.phi;
    row.vol_term = v.vol_term;
    row.bdry_term = v.bdry_term;
    row.dphi_bdry = d.boundary_part;
    row.dphi_int = d.interior_part;
    row.c1_margin = a.margin;
    row.admissible = a.admissible;
    margin_tol[k] = a.tolerance;
  });

  const double h2 = discretization_h2(u, opt);
  rep.min_boundary_part = INFINITY;
  for (std::size_t k = 0; k < rep.rows.size(); ++k) {
    const PhiScanRow& row = rep.rows[k];
    if (row.admissible) ++rep.admissible_count;
    rep.min_boundary_part = std::min(rep.min_boundary_part, row.dphi_bdry);
    if (k + 1 < rep.rows.size() && row.admissible && rep.rows[k + 1].admissible) {
      const PhiScanRow& next = rep.rows[k + 1];
      const double tol = opt.tol_factor * h2 * std::max({1.0, std::abs(row.phi), std::abs(next.phi)});
      rep.max_monotone_tolerance = std::max(rep.max_monotone_tolerance, tol);
      ++rep.monotone_checks;
      if (next.phi < row.phi - tol) {
        ++rep.monotone_violations;
        rep.violation_index.push_back(k);
      }
    }
  }

  if (opt.check_identity) {
    std::vector<IdentityReport> pairs(radii.size() - 1);
    parallel_for(pairs.size(), [&](std::size_t k) {
      pairs[k] = verify_monotonicity_elliptic(u, model, x0, beta, radii[k], radii[k + 1], opt, false);
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
    const double v3[3] = {rep.rows[0].phi, rep.rows[1].phi, rep.rows[2].phi};
    rep.limit_M = richardson_limit(r3, v3);
  } else {
    rep.limit_M = rep.rows.front().phi;
  }
  return rep;
}

}  // namespace monotone
