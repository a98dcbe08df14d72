#pragma once

#include <functional>
#include <memory>
#include <vector>

#include "monotone/field.hpp"
#include "monotone/types.hpp"

namespace monotone {

/// Point evaluation of an m-component field and its gradient anywhere in a region.
class FieldSampler {
 public:
  virtual ~FieldSampler() = default;
  virtual int dim() const = 0;
  virtual int components() const = 0;
  /// Grid spacing driving the discretization error; 0 for analytic fields.
  virtual double resolution() const = 0;
  /// Radius of the largest closed ball around x0 inside the sampling region.
  virtual double max_ball_radius(const Point& x0) const = 0;
  virtual void sample(const Point& p, Jet& out) const = 0;
};

/// Multilinear interpolation of nodal values and of nodal gradients
/// (central differences inside, one-sided second order on the boundary).
class GridFieldSampler final : public FieldSampler {
 public:
  explicit GridFieldSampler(std::shared_ptr<const Field> field);

  int dim() const override { return field_->dim(); }
  int components() const override { return field_->components(); }
  double resolution() const override { return field_->grid().max_spacing(); }
  double max_ball_radius(const Point& x0) const override { return field_->grid().max_ball_radius(x0); }
  void sample(const Point& p, Jet& out) const override;

  const Field& field() const { return *field_; }
  /// Nodal gradient of component c along axis d.
  double node_gradient(std::size_t node, int c, int d) const;

 private:
  std::shared_ptr<const Field> field_;
  int block_;                 // m * (1 + n) doubles per node
  std::vector<double> data_;  // per node: u_0..u_{m-1}, then grad of each component
};

/// Closed-form field with analytic gradient; samplable on all of R^n or on a box.
class AnalyticFieldSampler final : public FieldSampler {
 public:
  using Eval = std::function<void(const Point&, Jet&)>;
  AnalyticFieldSampler(int dim, int components, Eval eval, double half_width = INFINITY, Point center = {});

  int dim() const override { return dim_; }
  int components() const override { return m_; }
  double resolution() const override { return 0.0; }
  double max_ball_radius(const Point& x0) const override;
  void sample(const Point& p, Jet& out) const override;

 private:
  int dim_;
  int m_;
  Eval eval_;
  double half_width_;
  Point center_;
};

/// Lazy blow-up view u_rho(x) = rho^{-beta} u(x0 + rho x).
class RescaledSampler final : public FieldSampler {
 public:
  RescaledSampler(std::shared_ptr<const FieldSampler> base, const Point& x0, double rho, double beta);

  int dim() const override { return base_->dim(); }
  int components() const override { return base_->components(); }
  double resolution() const override { return base_->resolution() / rho_; }
  double max_ball_radius(const Point& y0) const override;
  void sample(const Point& p, Jet& out) const override;

 private:
  std::shared_ptr<const FieldSampler> base_;
  Point x0_;
  double rho_;
  double beta_;
};

/// Point evaluation of a space-time field with spatial gradient and time derivative.
class SpaceTimeSampler {
 public:
  virtual ~SpaceTimeSampler() = default;
  virtual int dim() const = 0;
  virtual int components() const = 0;
  virtual double resolution() const = 0;
  virtual double time_step() const = 0;
  virtual double t_min() const = 0;
  virtual double t_max() const = 0;
  virtual double max_ball_radius(const Point& x0) const = 0;
  /// Times strictly inside (a, b) where the interpolant has kinks.
  virtual std::vector<double> time_breaks(double a, double b) const = 0;
  virtual void sample(double t, const Point& p, SpaceTimeJet& out) const = 0;
};

/// Space-time grid data: spatial as GridFieldSampler, linear in time between
/// slices; du/dt by central differences (one-sided second order at the ends).
class GridSpaceTimeSampler final : public SpaceTimeSampler {
 public:
  explicit GridSpaceTimeSampler(std::shared_ptr<const SpaceTimeField> field);

  int dim() const override { return field_->dim(); }
  int components() const override { return field_->components(); }
  double resolution() const override { return field_->space().max_spacing(); }
  double time_step() const override { return field_->grid().dt(); }
  double t_min() const override { return field_->grid().t1(); }
  double t_max() const override { return field_->grid().t2(); }
  double max_ball_radius(const Point& x0) const override { return field_->space().max_ball_radius(x0); }
  std::vector<double> time_breaks(double a, double b) const override;
  void sample(double t, const Point& p, SpaceTimeJet& out) const override;

  const SpaceTimeField& field() const { return *field_; }

 private:
  std::shared_ptr<const SpaceTimeField> field_;
  int block_;  // m * (2 + n): u, u_t, grad
  std::vector<std::vector<double>> data_;
};

class AnalyticSpaceTimeSampler final : public SpaceTimeSampler {
 public:
  using Eval = std::function<void(double, const Point&, SpaceTimeJet&)>;
  AnalyticSpaceTimeSampler(int dim, int components, Eval eval, double t_min = -INFINITY,
                           double t_max = INFINITY, double half_width = INFINITY, Point center = {});

  int dim() const override { return dim_; }
  int components() const override { return m_; }
  double resolution() const override { return 0.0; }
  double time_step() const override { return 0.0; }
  double t_min() const override { return t_min_; }
  double t_max() const override { return t_max_; }
  double max_ball_radius(const Point& x0) const override;
  std::vector<double> time_breaks(double, double) const override { return {}; }
  void sample(double t, const Point& p, SpaceTimeJet& out) const override;

 private:
  int dim_;
  int m_;
  Eval eval_;
  double t_min_, t_max_;
  double half_width_;
  Point center_;
};

/// Lazy parabolic blow-up view u_rho(t, x) = rho^{-beta} u(T + rho^2 t, x0 + rho x).
class RescaledSpaceTimeSampler final : public SpaceTimeSampler {
 public:
  RescaledSpaceTimeSampler(std::shared_ptr<const SpaceTimeSampler> base, double T, const Point& x0,
                           double rho, double beta);

  int dim() const override { return base_->dim(); }
  int components() const override { return base_->components(); }
  double resolution() const override { return base_->resolution() / rho_; }
  double time_step() const override { return base_->time_step() / (rho_ * rho_); }
  double t_min() const override { return (base_->t_min() - T_) / (rho_ * rho_); }
  double t_max() const override { return (base_->t_max() - T_) / (rho_ * rho_); }
  double max_ball_radius(const Point& y0) const override;
  std::vector<double> time_breaks(double a, double b) const override;
  void sample(double t, const Point& p, SpaceTimeJet& out) const override;

 private:
  std::shared_ptr<const SpaceTimeSampler> base_;
  double T_;
  Point x0_;
  double rho_;
  double beta_;
};

/// Nodal gradient of component c of a field along axis d, second order everywhere.
double nodal_gradient(const Field& f, std::size_t node, int c, int d);

}  // namespace monotone
