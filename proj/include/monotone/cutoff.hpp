#pragma once

#include "monotone/types.hpp"

namespace monotone {

/// Radial profile of the cutoff: 1 on [0, 1/2], 0 on [3/4, inf), smooth
/// transition 1 - S(4(d - 1/2)) with S(t) = psi(t) / (psi(t) + psi(1-t)) and
/// psi(s) = exp(-1/s) for s > 0, psi(s) = 0 otherwise.
double cutoff_profile(double d);
double cutoff_profile_derivative(double d);

/// phi(x) = cutoff_profile(|x - x0|).
double cutoff_phi(const Point& x, const Point& x0, int n);
Point cutoff_gradient(const Point& x, const Point& x0, int n);

/// E(r) = int_0^r s^{-n-2beta-1} exp(-1/(16 s^2)) ds, integrated from the point
/// s_min where the integrand first exceeds `underflow`.
double error_integral_E(double r, int n, double beta, double underflow = 1e-300);

}  // namespace monotone
