#pragma once

#include <vector>

namespace hfanova {

/// Bessel function of the first kind J_order(x) for real order >= 0, x >= 0.
/// Absolute error below 1e-10 for order <= 200, x <= 1e4.
double bessel_j(double order, double x);

/// Derivative d/dx J_order(x).
double bessel_j_derivative(double order, double x);

/// Leading McMahon large-root guess pi*(h + order/2 - 1/4).
double mcmahon_zero_guess(double order, int root_index);

/// Olver large-order guess order + delta_h * order^(1/3), delta_h from Airy zeros.
double olver_zero_guess(double order, int root_index);

/// The first `count` positive zeros of J_order, strictly increasing.
std::vector<double> bessel_j_zeros(double order, int count);

/// The root_index-th positive zero of J_order (root_index >= 1).
double bessel_j_zero(double order, int root_index);

}  // namespace hfanova
