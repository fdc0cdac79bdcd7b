#include "icf/radial_graph.hpp"

#include "icf/errors.hpp"
#include "icf/local_geometry.hpp"

#include <cmath>
#include <sstream>

namespace icf {

StarShapedHypersurface::StarShapedHypersurface(ScalarField f) : f_(std::move(f)) {
  if (!f_.grid()) throw InvalidArgument("surface: radius field has no grid");
  inv_f_ = ScalarField(f_.grid());
  for (std::size_t k = 0; k < f_.size(); ++k) {
    if (!std::isfinite(f_[k]) || f_[k] <= kRadiusFloor) {
      std::ostringstream msg;
      msg << "radius " << f_[k] << " at node " << k << " is not above " << kRadiusFloor;
      throw DegenerateSurface(msg.str());
    }
    inv_f_[k] = 1.0 / f_[k];
  }
}

StarShapedHypersurface StarShapedHypersurface::invert() const { return {inv_f_, f_}; }

StarShapedHypersurface StarShapedHypersurface::scaled(double c) const {
  if (!(c > 0.0)) throw InvalidArgument("scale factor must be positive");
  return StarShapedHypersurface(c * f_);
}

double GeometryBundle::integrate(const ScalarField& field) const {
  grid->require(field);
  ScalarField weighted(grid);
  for (std::size_t k = 0; k < size(); ++k) weighted[k] = field[k] * area_density[k];
  return grid->integrate(weighted);
}

double GeometryBundle::area() const { return grid->integrate(area_density); }

double GeometryBundle::sigma_integral(int k) const {
  if (k < 0 || k > n) throw InvalidArgument("sigma_integral: k must lie in [0, n]");
  return integrate(sigma[k]);
}

GeometryBundle geometry(const StarShapedHypersurface& surface) {
  const auto& f = surface.f();
  const auto& grid = *surface.grid();
  const auto& gp = surface.grid();
  const auto d = grid.partials(f);
  const auto hess = grid.hessian(d);

  GeometryBundle b;
  b.grid = gp;
  b.n = 2;
  b.g = {ScalarField(gp), ScalarField(gp), ScalarField(gp)};
  b.g_inv = b.g;
  b.h = b.g;
  b.shape.resize(grid.size());
  b.w = ScalarField(gp);
  b.area_density = ScalarField(gp);
  b.H = ScalarField(gp);
  b.A2 = ScalarField(gp);
  b.A0_2 = ScalarField(gp);
  b.kappa.resize(grid.size());
  b.sigma.assign(3, ScalarField(gp));
  b.normal.resize(grid.size());
  b.position.resize(grid.size());

  for (int i = 0; i < grid.n_theta(); ++i) {
    const double s = grid.sin_theta(i);
    Eigen::Matrix2d round;
    round << 1.0, 0.0, 0.0, s * s;
    for (int j = 0; j < grid.n_phi(); ++j) {
      const std::size_t k = grid.index(i, j);
      const double fk = f[k];
      // grad log f = grad f / f; Hess log f = Hess f / f - grad log f (x) grad log f.
      const Eigen::Vector2d D(d.t[k] / fk, d.p[k] / fk);
      const Eigen::Matrix2d M = hess.at(k) / fk - D * D.transpose();
      LocalGeometry<2> lg;
      try {
        lg = local_geometry<2>(fk, D, M, round);
      } catch (const ResolutionError& e) {
        std::ostringstream msg;
        msg << e.what() << " at node (" << i << ", " << j << ")";
        throw ResolutionError(msg.str());
      }
      b.g.tt[k] = lg.g(0, 0);
      b.g.tp[k] = 0.5 * (lg.g(0, 1) + lg.g(1, 0));
      b.g.pp[k] = lg.g(1, 1);
      b.g_inv.tt[k] = lg.g_inv(0, 0);
      b.g_inv.tp[k] = 0.5 * (lg.g_inv(0, 1) + lg.g_inv(1, 0));
      b.g_inv.pp[k] = lg.g_inv(1, 1);
      b.h.tt[k] = lg.h(0, 0);
      b.h.tp[k] = 0.5 * (lg.h(0, 1) + lg.h(1, 0));
      b.h.pp[k] = lg.h(1, 1);
      b.shape[k] = lg.shape;
      b.w[k] = lg.w;
      b.area_density[k] = lg.area_density;
      b.H[k] = lg.H;
      b.A2[k] = lg.A2;
      b.A0_2[k] = lg.A0_2;
      b.kappa[k] = lg.kappa;
      for (int m = 0; m <= 2; ++m) b.sigma[m][k] = lg.sigma[m];
      const Eigen::Vector3d p = grid.point(i, j);
      b.position[k] = fk * p;
      b.normal[k] = (p - D(0) * grid.e_theta(i, j) - (D(1) / s) * grid.e_phi(i, j)) / lg.w;
    }
  }
  return b;
}

double area(const StarShapedHypersurface& surface) { return geometry(surface).area(); }

double sigma_integral(const StarShapedHypersurface& surface, int k) { return geometry(surface).sigma_integral(k); }

InversionCheck inversion_mean_curvature_check(const StarShapedHypersurface& surface) {
  const auto gp = surface.grid();
  const auto original = geometry(surface);
  const auto inverted = geometry(surface.invert());
  const int n = original.n;
  InversionCheck out{inverted.H, ScalarField(gp), ScalarField(gp), 0.0};
  const auto& f = surface.f();
  for (std::size_t k = 0; k < f.size(); ++k) {
    out.predicted[k] = -f[k] * f[k] * original.H[k] + 2.0 * n * f[k] / original.w[k];
    out.residual[k] = out.direct[k] - out.predicted[k];
    out.sup = std::max(out.sup, std::abs(out.residual[k]));
  }
  return out;
}

}  // namespace icf
