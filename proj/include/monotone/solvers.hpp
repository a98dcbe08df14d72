#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "monotone/field.hpp"
#include "monotone/model.hpp"

namespace monotone {

/// Second-order 3/5/7-point Laplacian of component c at an interior node.
double discrete_laplacian(const Field& u, std::size_t node, int c);

/// max over interior nodes and components of |Delta_h u_c + f_c(u)|.
double elliptic_residual(const Model& model, const Field& u);

struct EllipticSolverConfig {
  int max_iter = 50;
  double tol = 1e-10;
  double damping = 1.0;        // initial Newton step length
  double min_damping = 1.0 / 64.0;
  int gauss_seidel_sweeps = 20;  // nonlinear sweeps when damping bottoms out
  std::size_t direct_limit = 200000;  // unknowns above this use BiCGSTAB
};

/// Damped Newton for Delta_h u + f(u) = 0 with Dirichlet data taken from the
/// boundary nodes of `boundary` (its interior values are the initial guess).
Field solve_elliptic(const Model& model, const Field& boundary, const EllipticSolverConfig& cfg = {});

enum class BoundaryPolicy { DirichletFixed, DirichletFunction, Neumann };

const char* boundary_policy_name(BoundaryPolicy p);
BoundaryPolicy boundary_policy_from_name(const std::string& name);

struct ParabolicSolverConfig {
  double theta = 0.5;  // 1/2 Crank-Nicolson, 1 backward Euler
  double tol = 1e-10;  // bound on dt * |scheme residual| per step
  int max_newton = 30;
  double min_damping = 1.0 / 64.0;
  BoundaryPolicy boundary = BoundaryPolicy::DirichletFixed;
  /// Boundary values g(t, x) -> u[0..m) for DirichletFunction.
  std::function<void(double, const Point&, double*)> boundary_values;
};

/// theta-scheme for u_t - Delta u = f(u) on the time slices of `grid`, starting from `initial`.
SpaceTimeField solve_parabolic(const Model& model, const SpaceTimeGrid& grid, const Field& initial,
                               const ParabolicSolverConfig& cfg = {});

struct Thresholds {
  double theta_u = 0.0;  // 0 selects the default 10 h^2 max(1, |u|_inf)
  double theta_g = 0.0;  // 0 selects the default 10 h^2 max(1, |grad u|_inf)
};

/// Nodal indicator of Lambda = {u = |grad u| = 0} on every slice.
class CoincidenceSet {
 public:
  CoincidenceSet() = default;
  CoincidenceSet(SpaceTimeGrid grid, std::vector<std::vector<std::uint8_t>> lambda, double theta_u, double theta_g);

  const SpaceTimeGrid& grid() const { return grid_; }
  double theta_u() const { return theta_u_; }
  double theta_g() const { return theta_g_; }
  bool in_lambda(int slice, std::size_t node) const { return lambda_[slice][node] != 0; }
  const std::vector<std::uint8_t>& slice(int k) const { return lambda_[k]; }
  std::size_t count() const;

  /// Membership of the space-time node nearest to (t, x).
  bool contains(double t, const Point& x) const;
  /// Interpolated indicator of Omega = complement of Lambda at (t, x), in [0, 1].
  double omega_fraction(double t, const Point& x) const;

 private:
  SpaceTimeGrid grid_;
  std::vector<std::vector<std::uint8_t>> lambda_;
  double theta_u_ = 0.0;
  double theta_g_ = 0.0;
};

Thresholds default_thresholds(const Field& u);
std::vector<std::uint8_t> coincidence_indicator(const Field& u, const Thresholds& th);
CoincidenceSet coincidence_set(const SpaceTimeField& u, Thresholds th = {});

struct FreeBoundaryRun {
  SpaceTimeField field;
  CoincidenceSet chi;
};

/// Forward simulation of u_t - Delta u = chi_Omega f(u): each step uses the
/// indicator of the previous slice (explicit in chi). Thresholds default to the
/// initial field's values and stay fixed for the run.
FreeBoundaryRun simulate_free_boundary(const Model& model, const SpaceTimeGrid& grid, const Field& initial,
                                       const ParabolicSolverConfig& cfg = {}, Thresholds th = {});

}  // namespace monotone
