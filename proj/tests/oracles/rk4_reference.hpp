#pragma once

// Fixed-step classical Runge-Kutta, used as a slow reference for the
// adaptive flow maps.

#include <Eigen/Core>

namespace oracle {

template <class F>
Eigen::Vector3d rk4_flow(F&& field, double t, Eigen::Vector3d x, int steps) {
  const double h = t / steps;
  for (int s = 0; s < steps; ++s) {
    const Eigen::Vector3d k1 = field(x);
    const Eigen::Vector3d k2 = field(x + 0.5 * h * k1);
    const Eigen::Vector3d k3 = field(x + 0.5 * h * k2);
    const Eigen::Vector3d k4 = field(x + h * k3);
    x += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  return x;
}

}  // namespace oracle
