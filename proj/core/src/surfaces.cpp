#include "icf/surfaces.hpp"

#include "icf/errors.hpp"

#include <boost/math/special_functions/spherical_harmonic.hpp>

#include <cmath>
#include <numbers>

namespace icf {

double real_spherical_harmonic(int l, int m, double theta, double phi) {
  if (l < 0 || std::abs(m) > l) throw InvalidArgument("harmonic degree/order must satisfy 0 <= |m| <= l");
  const unsigned ul = static_cast<unsigned>(l);
  const int am = std::abs(m);
  // Boost includes the Condon-Shortley phase (-1)^m; remove it.
  const double sign = (am % 2 == 0) ? 1.0 : -1.0;
  if (m == 0) return boost::math::spherical_harmonic_r(ul, 0, theta, phi);
  if (m > 0) return std::numbers::sqrt2 * sign * boost::math::spherical_harmonic_r(ul, am, theta, phi);
  return std::numbers::sqrt2 * sign * boost::math::spherical_harmonic_i(ul, am, theta, phi);
}

StarShapedHypersurface make_sphere(const GridPtr& grid, double radius) {
  if (!(radius > 0.0) || !std::isfinite(radius)) throw InvalidArgument("sphere radius must be positive");
  return StarShapedHypersurface(grid->constant(radius));
}

StarShapedHypersurface make_spheroid(const GridPtr& grid, double a, double c) {
  if (!(a > 0.0 && c > 0.0) || !std::isfinite(a) || !std::isfinite(c)) {
    throw InvalidArgument("spheroid semi-axes must be positive");
  }
  return StarShapedHypersurface(grid->sample([=](double t, double) {
    const double s = std::sin(t) / a, q = std::cos(t) / c;
    return 1.0 / std::sqrt(s * s + q * q);
  }));
}

StarShapedHypersurface make_harmonic(const GridPtr& grid, double base, const std::vector<HarmonicTerm>& terms) {
  if (!std::isfinite(base)) throw InvalidArgument("harmonic base must be finite");
  for (const auto& t : terms) {
    if (t.l < 0 || std::abs(t.m) > t.l) throw InvalidArgument("harmonic degree/order must satisfy 0 <= |m| <= l");
    if (!std::isfinite(t.amplitude)) throw InvalidArgument("harmonic amplitude must be finite");
  }
  // Y_lm = Theta_l^|m|(theta) * (cos m phi | sin |m| phi); Theta is evaluated once per ring.
  ScalarField f = grid->constant(base);
  std::vector<double> ring(terms.size());
  for (int i = 0; i < grid->n_theta(); ++i) {
    for (std::size_t k = 0; k < terms.size(); ++k) {
      ring[k] = terms[k].amplitude * real_spherical_harmonic(terms[k].l, std::abs(terms[k].m), grid->theta(i), 0.0);
    }
    for (int j = 0; j < grid->n_phi(); ++j) {
      const double phi = grid->phi(j);
      double v = f(i, j);
      for (std::size_t k = 0; k < terms.size(); ++k) {
        const int m = terms[k].m;
        v += ring[k] * (m >= 0 ? std::cos(m * phi) : std::sin(-m * phi));
      }
      f(i, j) = v;
    }
  }
  return StarShapedHypersurface(std::move(f));
}

StarShapedHypersurface resample(const StarShapedHypersurface& surface, const GridPtr& grid) {
  if (surface.grid()->spec() == grid->spec()) return surface;
  const auto interp = surface.grid()->interpolant(surface.f());
  return StarShapedHypersurface(grid->sample([&](double t, double p) { return interp(t, p); }));
}

}  // namespace icf
