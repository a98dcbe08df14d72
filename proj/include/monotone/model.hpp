#pragma once

#include <string>
#include <utility>
#include <vector>

#include "monotone/expression.hpp"
#include "monotone/types.hpp"

namespace monotone {

enum class ModelKind {
  Zero,            // F = 0
  CoupledLinear,   // F = u v + c
  Helmholtz,       // F = |u|^2 / 2 + c, f = u
  GinzburgLandau,  // F = (1 - |u|^2)^2 / (4 eps^2)
  CoupledPower,    // F = u^{p+1} v^{q+1} / ((p+1)(q+1)) + c
  SinglePower,     // F = u^{p+1} / (p+1)
  LogPotential,    // F = log u + c
  Custom,          // F and f from expressions
};

const char* model_kind_name(ModelKind k);

/// Closed interval of admissible values for one component.
struct Interval {
  double lo = -INFINITY;
  double hi = INFINITY;
  bool contains(double v) const { return v >= lo && v <= hi; }
};

/// Potential F with gradient f = grad F and the admissible range of u.
class Model {
 public:
  static Model zero(int m = 1);
  static Model coupled_linear(double c);
  static Model helmholtz(double c = 0.0, int m = 1);
  static Model ginzburg_landau(double epsilon, int m = 1);
  static Model coupled_power(double p, double q, double c);
  static Model single_power(double p, double delta_floor = 1e-8);
  static Model log_potential(double c, double delta_floor = 1e-8);
  /// f_exprs may be empty, in which case f is F differentiated by central differences.
  /// When f is given it is cross-checked against F on a sample and rejected if inconsistent.
  static Model custom(int m, const std::string& F_expr, const std::vector<std::string>& f_exprs = {},
                      std::vector<Interval> domain = {});

  ModelKind kind() const { return kind_; }
  std::string name() const;
  int components() const { return m_; }
  const Interval& domain(int c) const { return domain_[c]; }
  double c() const { return c_; }
  double epsilon() const { return eps_; }
  double p() const { return p_; }
  double q() const { return q_; }
  const std::string& F_text() const { return F_expr_.text(); }

  bool in_domain(const double* u) const;
  /// Throws ModelDomainError naming the first offending component.
  void require_domain(const double* u) const;

  double F(const double* u) const;
  void f(const double* u, double* out) const;
  /// Row-major m x m Jacobian of f.
  void jacobian(const double* u, double* out) const;
  /// 2(beta-1) F(u) - beta u . f(u).
  double interior_integrand(double beta, const double* u) const;

  double F_unchecked(const double* u) const;
  void f_unchecked(const double* u, double* out) const;

 private:
  Model(ModelKind kind, int m) : kind_(kind), m_(m), domain_(m) {}

  ModelKind kind_;
  int m_;
  std::vector<Interval> domain_;
  double c_ = 0.0, eps_ = 1.0, p_ = 0.0, q_ = 0.0;
  Expression F_expr_;
  std::vector<Expression> f_expr_;
};

struct AdmissibilityReport {
  std::vector<double> betas;
  std::vector<double> minima;      // min of the interior integrand over the probed set
  std::vector<double> tolerances;  // per-beta round-off tolerance
  std::vector<bool> admissible;    // minima >= -tolerance
  std::vector<Interval> box;
  std::size_t samples = 0;
};

/// Minimizes the interior integrand over a dense sample of the u-box for each
/// beta on an evenly spaced grid.
AdmissibilityReport pointwise_beta_interval(const Model& model, const std::vector<Interval>& u_box, double beta_lo,
                                            double beta_hi, int n_beta, int samples_per_axis = 0);

/// Evenly spaced grid lo + k (hi - lo) / (count - 1).
std::vector<double> linspace(double lo, double hi, int count);

}  // namespace monotone
