#pragma once

// Classical parametric description of the spheroid
//   X(u, v) = (a sin u cos v, a sin u sin v, c cos u),
// independent of the radial-graph machinery under test.

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <numbers>

namespace oracle {

struct Spheroid {
  double a = 1.0;
  double c = 0.6;

  /// Radius of the spheroid along the ray of colatitude theta.
  double radius(double theta) const {
    const double s = std::sin(theta) / a, q = std::cos(theta) / c;
    return 1.0 / std::sqrt(s * s + q * q);
  }

  /// Parameter u of the point hit by the ray of colatitude theta.
  double u_of(double theta) const { return std::atan2(c * std::sin(theta), a * std::cos(theta)); }

  double speed(double u) const {
    return std::sqrt(a * a * std::cos(u) * std::cos(u) + c * c * std::sin(u) * std::sin(u));
  }

  double kappa_meridian(double u) const { return a * c / std::pow(speed(u), 3); }
  double kappa_parallel(double u) const { return c / (a * speed(u)); }
  double mean_curvature(double u) const { return kappa_meridian(u) + kappa_parallel(u); }
  double gauss_curvature(double u) const { return kappa_meridian(u) * kappa_parallel(u); }

  template <class F>
  double surface_integral(F&& integrand) const {
    auto dA = [&](double u) { return 2.0 * std::numbers::pi * a * std::sin(u) * speed(u) * integrand(u); };
    return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(dA, 0.0, std::numbers::pi, 15, 1e-14);
  }

  double area() const { return surface_integral([](double) { return 1.0; }); }
  double total_mean_curvature() const { return surface_integral([&](double u) { return mean_curvature(u); }); }
  double willmore() const {
    return surface_integral([&](double u) { return mean_curvature(u) * mean_curvature(u); });
  }
};

}  // namespace oracle
