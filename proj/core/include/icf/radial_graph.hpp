#pragma once

#include "icf/sphere_grid.hpp"

#include <Eigen/Core>

#include <array>
#include <vector>

namespace icf {

/// The radial graph {f(p) p : p in S^2} of a positive function f.
class StarShapedHypersurface {
 public:
  static constexpr double kRadiusFloor = 1e-8;

  /// Throws DegenerateSurface if f <= kRadiusFloor somewhere or f is not finite.
  explicit StarShapedHypersurface(ScalarField f);

  const ScalarField& f() const { return f_; }
  /// 1/f, cached so that invert() is an exact involution.
  const ScalarField& reciprocal() const { return inv_f_; }
  const GridPtr& grid() const { return f_.grid(); }
  int dimension() const { return 2; }

  /// Inversion in the unit sphere: the radial graph of 1/f.
  StarShapedHypersurface invert() const;
  StarShapedHypersurface scaled(double c) const;

 private:
  StarShapedHypersurface(ScalarField f, ScalarField inv_f) : f_(std::move(f)), inv_f_(std::move(inv_f)) {}
  ScalarField f_;
  ScalarField inv_f_;
};

/// Per-node first and second fundamental forms, normal and curvatures.
struct GeometryBundle {
  GridPtr grid;
  int n = 2;
  CovariantTensor2 g;
  CovariantTensor2 g_inv;
  CovariantTensor2 h;
  std::vector<Eigen::Matrix2d> shape;  // h_i^j = g^{ik} h_kj
  ScalarField w;                       // sqrt(1 + |grad log f|^2)
  ScalarField area_density;            // dmu / dmu_{S^2}
  ScalarField H;
  ScalarField A2;    // |A|^2
  ScalarField A0_2;  // |A°|^2
  std::vector<std::array<double, 2>> kappa;  // ascending
  std::vector<ScalarField> sigma;           // sigma_0 .. sigma_n
  std::vector<Eigen::Vector3d> normal;      // outward unit normal
  std::vector<Eigen::Vector3d> position;    // f p

  std::size_t size() const { return grid->size(); }
  /// Integral over the surface: quadrature of field * area_density.
  double integrate(const ScalarField& field) const;
  double area() const;
  double sigma_integral(int k) const;
};

/// Throws DegenerateSurface / ResolutionError.
GeometryBundle geometry(const StarShapedHypersurface& surface);

double area(const StarShapedHypersurface& surface);
double sigma_integral(const StarShapedHypersurface& surface, int k);

struct InversionCheck {
  ScalarField direct;     // mean curvature of invert(surface)
  ScalarField predicted;  // -f^2 H + 2 n f / w from the original surface
  ScalarField residual;   // direct - predicted
  double sup = 0.0;
};

InversionCheck inversion_mean_curvature_check(const StarShapedHypersurface& surface);

}  // namespace icf
