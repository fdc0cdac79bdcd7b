#pragma once

#include "icf/radial_graph.hpp"

#include <vector>

namespace icf {

/// Orthonormal real spherical harmonic (no Condon-Shortley phase):
/// m > 0 -> sqrt(2) Pbar_l^m cos(m phi), m < 0 -> sqrt(2) Pbar_l^|m| sin(|m| phi).
double real_spherical_harmonic(int l, int m, double theta, double phi);

struct HarmonicTerm {
  int l = 0;
  int m = 0;
  double amplitude = 0.0;
};

/// Each throws InvalidArgument on bad parameters and DegenerateSurface when
/// the resulting radius is not positive.
StarShapedHypersurface make_sphere(const GridPtr& grid, double radius);
/// Spheroid with equatorial semi-axis a and polar semi-axis c.
StarShapedHypersurface make_spheroid(const GridPtr& grid, double a, double c);
/// f = base + sum amplitude * Y_lm.
StarShapedHypersurface make_harmonic(const GridPtr& grid, double base, const std::vector<HarmonicTerm>& terms);

/// Resamples a surface onto another grid through the field interpolant.
StarShapedHypersurface resample(const StarShapedHypersurface& surface, const GridPtr& grid);

}  // namespace icf
