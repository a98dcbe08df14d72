#pragma once

#include <string>
#include <vector>

#include "monotone/model.hpp"
#include "monotone/quadrature.hpp"
#include "monotone/sampler.hpp"

namespace monotone {

struct EllipticOptions {
  QuadratureConfig quadrature;
  int n_quad_r = 16;                   // Gauss-Legendre radii for integrating the derivative in r
  double tol_factor = 10.0;            // tolerances are tol_factor * (h^2 + quadrature error) * scale
  double discretization_floor = 1e-10; // stands in for h^2 on analytic fields
  bool check_identity = true;          // phi_scan: integrated identity between consecutive radii
};

/// Phi = vol_term - bdry_term with
///   vol_term  = r^{2-n-2beta} int_{B_r} (|grad u|^2 - 2F(u)),
///   bdry_term = beta r^{1-n-2beta} int_{dB_r} |u|^2.
struct PhiValue {
  double r = 0.0;
  double phi = 0.0;
  double vol_term = 0.0;
  double bdry_term = 0.0;
};

/// The two summands of dPhi/dr:
///   boundary_part = 2 r^{2-n-2beta} int_{dB_r} (d_nu u - beta u / r)^2   (>= 0),
///   interior_part = 2 r^{1-n-2beta} int_{B_r} (2(beta-1)F(u) - beta u.f(u)).
struct PhiDerivative {
  double boundary_part = 0.0;
  double interior_part = 0.0;
};

struct IdentityReport {
  std::string identity;  // pohozaev | ibp | monotonicity_elliptic | monotonicity_parabolic | parabolic_ibp
  std::vector<double> radii;
  double lhs = 0.0;
  double rhs = 0.0;
  double residual = 0.0;  // |lhs - rhs|
  double tolerance = 0.0;
  double scale = 1.0;
  double quadrature_error = 0.0;
  bool pass = false;
};

struct Admissibility {
  bool admissible = false;
  double margin = 0.0;
  double tolerance = 0.0;
};

/// Discretization scale h^2 of a sampler, floored for analytic fields.
double discretization_h2(const FieldSampler& u, const EllipticOptions& opt);

PhiValue phi(const FieldSampler& u, const Model& model, const Point& x0, double beta, double r, const Quadrature& quad);
PhiDerivative phi_derivative_decomposition(const FieldSampler& u, const Model& model, const Point& x0, double beta,
                                           double r, const Quadrature& quad);

/// lhs = int_{B_r} [n(|grad u|^2 - 2F) - 2|grad u|^2], rhs = int_{dB_r} [r(|grad u|^2 - 2F) - 2r (d_nu u)^2].
IdentityReport pohozaev_residual(const FieldSampler& u, const Model& model, const Point& x0, double r,
                                 const EllipticOptions& opt = {});
/// lhs = int_{B_r} |grad u|^2, rhs = int_{dB_r} u . d_nu u + int_{B_r} u . f(u).
IdentityReport ibp_residual(const FieldSampler& u, const Model& model, const Point& x0, double r,
                            const EllipticOptions& opt = {});

/// lhs = Phi(sigma) - Phi(rho), rhs = Gauss-Legendre integral over [rho, sigma] of
/// boundary_part + interior_part. Requires the integration-by-parts identity to
/// hold at rho and sigma; otherwise throws HypothesisError carrying the residual.
IdentityReport verify_monotonicity_elliptic(const FieldSampler& u, const Model& model, const Point& x0, double beta,
                                            double rho, double sigma, const EllipticOptions& opt = {},
                                            bool gate = true);

/// margin = int_{B_r} (2(beta-1)F - beta u.f); admissible when margin >= -tolerance.
Admissibility beta_admissible_elliptic(const FieldSampler& u, const Model& model, const Point& x0, double beta,
                                       double r, const EllipticOptions& opt = {});

struct PhiScanRow {
  double r = 0.0;
  double phi = 0.0;
  double vol_term = 0.0;
  double bdry_term = 0.0;
  double dphi_bdry = 0.0;
  double dphi_int = 0.0;
  double c1_margin = 0.0;
  bool admissible = false;
};

struct FunctionalReport {
  Point x0{};
  int dim = 1;
  double beta = 0.0;
  double h = 0.0;
  std::vector<PhiScanRow> rows;
  std::size_t admissible_count = 0;
  std::size_t monotone_checks = 0;    // consecutive admissible pairs examined
  std::size_t monotone_violations = 0;
  std::vector<std::size_t> violation_index;  // k with Phi(r_{k+1}) < Phi(r_k) - tol
  double max_monotone_tolerance = 0.0;
  std::size_t identity_checks = 0;
  std::size_t identity_failures = 0;
  double max_identity_residual = 0.0;
  double max_identity_tolerance = 0.0;
  double min_boundary_part = 0.0;
  double limit_M = 0.0;  // extrapolated small-r limit of Phi
};

FunctionalReport phi_scan(const FieldSampler& u, const Model& model, const Point& x0, double beta, double r_min,
                          double r_max, int n_r, const EllipticOptions& opt = {});

/// Value at 0 of the quadratic through three (r, value) pairs.
double richardson_limit(const double r[3], const double v[3]);

}  // namespace monotone
