#pragma once

#include <array>
#include <cmath>
#include <cstddef>

namespace monotone {

inline constexpr int kMaxDim = 3;
inline constexpr int kMaxComponents = 8;

/// A point of R^n stored in a fixed 3-slot array; unused slots are zero.
using Point = std::array<double, kMaxDim>;

inline double dot(const Point& a, const Point& b, int n) {
  double s = 0.0;
  for (int d = 0; d < n; ++d) s += a[d] * b[d];
  return s;
}

inline double distance(const Point& a, const Point& b, int n) {
  double s = 0.0;
  for (int d = 0; d < n; ++d) s += (a[d] - b[d]) * (a[d] - b[d]);
  return std::sqrt(s);
}

/// Values and spatial gradients of an m-component field at one point.
struct Jet {
  int m = 1;
  std::array<double, kMaxComponents> u{};
  std::array<Point, kMaxComponents> grad{};

  double u_squared() const {
    double s = 0.0;
    for (int i = 0; i < m; ++i) s += u[i] * u[i];
    return s;
  }
  double grad_squared(int n) const {
    double s = 0.0;
    for (int i = 0; i < m; ++i) s += dot(grad[i], grad[i], n);
    return s;
  }
};

/// Jet of a space-time field; adds the time derivative of each component.
struct SpaceTimeJet : Jet {
  std::array<double, kMaxComponents> u_t{};
};

}  // namespace monotone
