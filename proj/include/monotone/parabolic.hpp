#pragma once

#include <string>
#include <vector>

#include "monotone/elliptic.hpp"
#include "monotone/kernel.hpp"
#include "monotone/model.hpp"
#include "monotone/sampler.hpp"
#include "monotone/solvers.hpp"

namespace monotone {

struct ParabolicOptions {
  QuadratureConfig quadrature{256, 32, 64, 48, 1};
  LayerConfig layer;
  int n_quad_r = 8;
  double tol_factor = 10.0;
  double discretization_floor = 1e-10;
  bool check_identity = true;
};

/// Psi = energy_term - u2_term with
///   energy_term = r^{-2beta} int_layer (|grad u|^2 - 2F) G,
///   u2_term     = (beta/2) r^{-2beta} int_layer u^2 G / (T - t).
struct PsiValue {
  double r = 0.0;
  double psi = 0.0;
  double energy_term = 0.0;
  double u2_term = 0.0;
  double tail_bound = 0.0;
  bool truncation_warning = false;
};

/// Summands of dPsi/dr:
///   interior_part = 2 r^{-2beta-1} int_layer (2(beta-1)F - beta u.f) G,
///   residual_part = r^{-2beta-1} int_layer (grad u.(x-x0) - 2(T-t) u_t - beta u)^2 G / (T - t),
///   cutoff_part   = the annulus term collected from the cutoff gradient (zero without a cutoff).
struct PsiDerivative {
  double interior_part = 0.0;
  double residual_part = 0.0;
  double cutoff_part = 0.0;
  double tail_bound = 0.0;
};

/// Largest admissible radius: sqrt(T - t_min)/2 on the minus side, sqrt(t_max - T)/2 on the plus side.
double psi_radius_limit(const SpaceTimeSampler& u, double T, Side side);
/// Throws OutOfDomainError unless 0 < r < psi_radius_limit.
void require_psi_radius(const SpaceTimeSampler& u, double T, double r, Side side);

double parabolic_h2(const SpaceTimeSampler& u, const ParabolicOptions& opt);

PsiValue psi(const SpaceTimeSampler& u, const Model& model, double T, const Point& x0, double beta, double r,
             Side side, const ParabolicOptions& opt = {});
PsiDerivative psi_derivative_decomposition(const SpaceTimeSampler& u, const Model& model, double T,
                                           const Point& x0, double beta, double r, Side side,
                                           const ParabolicOptions& opt = {});

/// lhs = int_layer |grad u|^2 G, rhs = -int_layer [u grad u.grad G + G u (u_t - f(u))].
IdentityReport parabolic_ibp_residual(const SpaceTimeSampler& u, const Model& model, double T, const Point& x0,
                                      double r, Side side, const ParabolicOptions& opt = {});

/// lhs = Psi(sigma) - Psi(rho), rhs = r-quadrature of interior_part + residual_part.
/// With gate, the integration-by-parts identity must hold at sigma.
IdentityReport verify_monotonicity_parabolic(const SpaceTimeSampler& u, const Model& model, double T,
                                             const Point& x0, double beta, double rho, double sigma, Side side,
                                             const ParabolicOptions& opt = {}, bool gate = true);

/// margin = int_layer (2(beta-1)F - beta u.f) G.
Admissibility beta_admissible_parabolic(const SpaceTimeSampler& u, const Model& model, double T, const Point& x0,
                                        double beta, double r, Side side, const ParabolicOptions& opt = {});

struct FreeBoundaryPsi {
  PsiValue value;        // cutoff-weighted, Omega-masked Psi (without the envelope)
  double E_r = 0.0;
  double C = 0.0;
  double total = 0.0;    // value.psi + C E(r)
  double cutoff_part = 0.0;
  double cutoff_bound = 0.0;  // C r^{-n-2beta-1} exp(-1/(16 r^2))
};

/// Requires (T, x0) in the coincidence set; throws HypothesisError otherwise.
FreeBoundaryPsi psi_free_boundary(const SpaceTimeSampler& u, const Model& model, const CoincidenceSet& chi,
                                  double T, const Point& x0, double beta, double r, Side side, double C,
                                  const ParabolicOptions& opt = {});

/// Cutoff-weighted, Omega-masked Psi without the envelope; chi may be null (Omega everywhere).
PsiValue psi_cutoff(const SpaceTimeSampler& u, const Model& model, const CoincidenceSet* chi, double T,
                    const Point& x0, double beta, double r, Side side, const ParabolicOptions& opt = {});

/// Derivative summands of the cutoff-weighted functional (cutoff_part filled).
PsiDerivative psi_free_boundary_derivative(const SpaceTimeSampler& u, const Model& model, const CoincidenceSet* chi,
                                           double T, const Point& x0, double beta, double r, Side side,
                                           const ParabolicOptions& opt = {});

struct CalibrationReport {
  double C = 0.0;
  double h1_norm = 0.0;
  double h2_norm = 0.0;
  double sup_ratio = 0.0;  // max over radii of |cutoff_part| / (r^{-n-2beta-1} exp(-1/(16 r^2)))
};

/// L1 norms of the annulus integrands over (B_{3/4} \ B_{1/2}) x [T-1, T] (plus side: [T, T+1])
/// and the observed ratio on `radii`; C is the largest of the three.
CalibrationReport calibrate_C(const SpaceTimeSampler& u, const Model& model, const CoincidenceSet* chi, double T,
                              const Point& x0, double beta, Side side, const std::vector<double>& radii,
                              const ParabolicOptions& opt = {});

struct PsiScanRow {
  double r = 0.0;
  double psi = 0.0;
  double energy_term = 0.0;
  double u2_term = 0.0;
  double dpsi_res = 0.0;
  double dpsi_int = 0.0;
  double dpsi_cut = 0.0;
  double c23_margin = 0.0;
  bool admissible = false;
  double trunc_bound = 0.0;
  double E_r = 0.0;
  double total = 0.0;  // psi + C E(r)
};

struct ParabolicFunctionalReport {
  double T = 0.0;
  Point x0{};
  int dim = 1;
  double beta = 0.0;
  Side side = Side::Minus;
  bool free_boundary = false;
  double C = 0.0;
  double h = 0.0;
  double dt = 0.0;
  std::vector<PsiScanRow> rows;
  std::size_t admissible_count = 0;
  std::size_t monotone_checks = 0;
  std::size_t monotone_violations = 0;
  std::vector<std::size_t> violation_index;
  double max_monotone_tolerance = 0.0;
  std::size_t identity_checks = 0;
  std::size_t identity_failures = 0;
  double max_identity_residual = 0.0;
  double max_identity_tolerance = 0.0;
  double min_residual_part = 0.0;
  double max_trunc_bound = 0.0;
  bool truncation_warning = false;
  double limit_M = 0.0;
};

/// Scan of Psi (or of the cutoff-weighted Psi + C E(r) when chi is given).
ParabolicFunctionalReport psi_scan(const SpaceTimeSampler& u, const Model& model, double T, const Point& x0,
                                   double beta, Side side, double r_min, double r_max, int n_r,
                                   const ParabolicOptions& opt = {}, const CoincidenceSet* chi = nullptr,
                                   double C = 0.0);

}  // namespace monotone
