#include "monotone/grid.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "monotone/error.hpp"

namespace monotone {

CartesianGrid::CartesianGrid(const std::vector<Axis>& axes) {
  if (axes.empty() || axes.size() > static_cast<std::size_t>(kMaxDim)) {
    throw ArgumentError("grid dimension must be 1, 2 or 3");
  }
  dim_ = static_cast<int>(axes.size());
  std::size_t stride = 1;
  for (int d = 0; d < dim_; ++d) {
    const Axis& a = axes[d];
    if (a.count < 3) {
      throw ArgumentError("axis " + std::to_string(d + 1) + " needs at least 3 nodes");
    }
    if (!(a.hi > a.lo) || !std::isfinite(a.lo) || !std::isfinite(a.hi)) {
      throw ArgumentError("axis " + std::to_string(d + 1) + " extent must satisfy lo < hi");
    }
    axes_[d] = a;
    strides_[d] = stride;
    stride *= static_cast<std::size_t>(a.count);
  }
  for (int d = dim_; d < kMaxDim; ++d) {
    axes_[d] = Axis{0.0, 0.0, 1};
    strides_[d] = stride;
  }
  node_count_ = stride;
}

CartesianGrid CartesianGrid::cube(int dim, double lo, double hi, int count) {
  return CartesianGrid(std::vector<Axis>(static_cast<std::size_t>(dim), Axis{lo, hi, count}));
}

double CartesianGrid::max_spacing() const {
  double h = 0.0;
  for (int d = 0; d < dim_; ++d) h = std::max(h, spacing(d));
  return h;
}

std::size_t CartesianGrid::index(const std::array<int, kMaxDim>& ijk) const {
  std::size_t flat = 0;
  for (int d = 0; d < dim_; ++d) flat += static_cast<std::size_t>(ijk[d]) * strides_[d];
  return flat;
}

std::array<int, kMaxDim> CartesianGrid::multi_index(std::size_t flat) const {
  std::array<int, kMaxDim> ijk{};
  for (int d = 0; d < dim_; ++d) {
    ijk[d] = static_cast<int>(flat % static_cast<std::size_t>(axes_[d].count));
    flat /= static_cast<std::size_t>(axes_[d].count);
  }
  return ijk;
}

Point CartesianGrid::node(std::size_t flat) const {
  const auto ijk = multi_index(flat);
  Point p{};
  for (int d = 0; d < dim_; ++d) p[d] = axes_[d].coord(ijk[d]);
  return p;
}

bool CartesianGrid::is_boundary(std::size_t flat) const {
  const auto ijk = multi_index(flat);
  for (int d = 0; d < dim_; ++d) {
    if (ijk[d] == 0 || ijk[d] == axes_[d].count - 1) return true;
  }
  return false;
}

bool CartesianGrid::contains(const Point& p, double eps) const {
  for (int d = 0; d < dim_; ++d) {
    const double slack = eps * std::max(1.0, axes_[d].hi - axes_[d].lo);
    if (p[d] < axes_[d].lo - slack || p[d] > axes_[d].hi + slack) return false;
  }
  return true;
}

bool CartesianGrid::contains_ball(const Point& x0, double r) const {
  return max_ball_radius(x0) >= r * (1.0 - 1e-12);
}

double CartesianGrid::max_ball_radius(const Point& x0) const {
  double r = INFINITY;
  for (int d = 0; d < dim_; ++d) {
    r = std::min(r, std::min(x0[d] - axes_[d].lo, axes_[d].hi - x0[d]));
  }
  return r;
}

bool CartesianGrid::operator==(const CartesianGrid& other) const {
  if (dim_ != other.dim_) return false;
  for (int d = 0; d < dim_; ++d) {
    if (axes_[d].lo != other.axes_[d].lo || axes_[d].hi != other.axes_[d].hi ||
        axes_[d].count != other.axes_[d].count) {
      return false;
    }
  }
  return true;
}

RadialGrid::RadialGrid(int dim, double r_max, int count) : dim_(dim), r_max_(r_max), count_(count) {
  if (dim < 1 || dim > kMaxDim) throw ArgumentError("radial grid dimension must be 1, 2 or 3");
  if (!(r_max > 0.0)) throw ArgumentError("radial grid needs r_max > 0");
  if (count < 3) throw ArgumentError("radial grid needs at least 3 nodes");
}

SpaceTimeGrid::SpaceTimeGrid(CartesianGrid space, double t1, double t2, int slices)
    : space_(std::move(space)), t1_(t1), t2_(t2), slices_(slices) {
  if (!(t1 < t2)) throw ArgumentError("space-time grid needs t1 < t2");
  if (slices < 2) throw ArgumentError("space-time grid needs at least 2 slices");
}

}  // namespace monotone
