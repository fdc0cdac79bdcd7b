#pragma once

#include <Eigen/Core>

#include <span>
#include <vector>

namespace icf {

/// Uniform nodes on S^1 with spectral differentiation; the n = 1 analogue of
/// SphereGrid, used to exercise the dimension-generic geometry kernel on
/// closed star-shaped curves.
class CircleGrid {
 public:
  explicit CircleGrid(int n);

  int size() const { return n_; }
  double phi(int j) const;
  double weight() const;

  std::vector<double> sample(double (*fn)(double)) const;
  template <class F>
  std::vector<double> sample_with(F&& fn) const {
    std::vector<double> out(n_);
    for (int j = 0; j < n_; ++j) out[j] = fn(phi(j));
    return out;
  }

  std::vector<double> derivative(std::span<const double> values, int order) const;
  double integrate(std::span<const double> values) const;

 private:
  int n_;
};

struct CurveGeometry {
  std::vector<double> kappa;             // signed curvature, positive for circles
  std::vector<double> length_density;    // ds / dphi
  std::vector<Eigen::Vector2d> normal;   // outward unit normal
  std::vector<Eigen::Vector2d> position;

  double length(const CircleGrid& grid) const { return grid.integrate(length_density); }
};

/// Geometry of the star-shaped curve r = f(phi).
CurveGeometry curve_geometry(const CircleGrid& grid, std::span<const double> f);

}  // namespace icf
