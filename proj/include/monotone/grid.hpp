#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "monotone/types.hpp"

namespace monotone {

/// One uniformly spaced coordinate axis [lo, hi] with `count` nodes.
struct Axis {
  double lo = 0.0;
  double hi = 1.0;
  int count = 3;

  double spacing() const { return (hi - lo) / (count - 1); }
  double coord(int i) const { return lo + i * spacing(); }
};

/// Tensor-product grid of uniformly spaced nodes in n <= 3 dimensions.
/// Node order is row-major with the first axis varying fastest.
class CartesianGrid {
 public:
  CartesianGrid() = default;
  explicit CartesianGrid(const std::vector<Axis>& axes);

  /// Cube [lo, hi]^n with `count` nodes per axis.
  static CartesianGrid cube(int dim, double lo, double hi, int count);

  int dim() const { return dim_; }
  const Axis& axis(int d) const { return axes_[d]; }
  int count(int d) const { return axes_[d].count; }
  double spacing(int d) const { return axes_[d].spacing(); }
  double max_spacing() const;
  std::size_t node_count() const { return node_count_; }
  std::size_t stride(int d) const { return strides_[d]; }

  std::size_t index(const std::array<int, kMaxDim>& ijk) const;
  std::array<int, kMaxDim> multi_index(std::size_t flat) const;
  Point node(std::size_t flat) const;
  bool is_boundary(std::size_t flat) const;

  /// True when p lies inside the bounding box (closed, with slack eps).
  bool contains(const Point& p, double eps = 1e-12) const;
  /// True when the closed ball B_r(x0) lies inside the bounding box.
  bool contains_ball(const Point& x0, double r) const;
  /// Largest radius of a ball around x0 that stays inside the box.
  double max_ball_radius(const Point& x0) const;

  bool operator==(const CartesianGrid& other) const;

 private:
  int dim_ = 0;
  std::array<Axis, kMaxDim> axes_{};
  std::array<std::size_t, kMaxDim> strides_{};
  std::size_t node_count_ = 0;
};

/// Radial nodes for radially symmetric profiles. The first node sits at
/// dr/2 so that no node lies on the coordinate singularity r = 0.
class RadialGrid {
 public:
  RadialGrid(int dim, double r_max, int count);

  int dim() const { return dim_; }
  double r_max() const { return r_max_; }
  int count() const { return count_; }
  double spacing() const { return r_max_ / count_; }
  double node(int i) const { return (i + 0.5) * spacing(); }

 private:
  int dim_;
  double r_max_;
  int count_;
};

/// Spatial grid times a uniform sequence of time slices t1 = s_0 < ... < s_{K-1} = t2.
class SpaceTimeGrid {
 public:
  SpaceTimeGrid() = default;
  SpaceTimeGrid(CartesianGrid space, double t1, double t2, int slices);

  const CartesianGrid& space() const { return space_; }
  double t1() const { return t1_; }
  double t2() const { return t2_; }
  int slices() const { return slices_; }
  double dt() const { return (t2_ - t1_) / (slices_ - 1); }
  double time(int k) const { return k == slices_ - 1 ? t2_ : t1_ + k * dt(); }
  bool contains_time(double t, double eps = 1e-12) const {
    return t >= t1_ - eps && t <= t2_ + eps;
  }

 private:
  CartesianGrid space_;
  double t1_ = 0.0;
  double t2_ = 1.0;
  int slices_ = 2;
};

}  // namespace monotone
