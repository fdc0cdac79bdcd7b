#include "icf/circle_grid.hpp"

#include "icf/errors.hpp"
#include "icf/local_geometry.hpp"
#include "fftw_lock.hpp"

#include <fftw3.h>

#include <cmath>
#include <complex>
#include <mutex>
#include <numbers>

namespace icf {

CircleGrid::CircleGrid(int n) : n_(n) {
  if (n < 8 || n % 2 != 0) throw InvalidArgument("circle grid needs an even node count >= 8");
}

double CircleGrid::phi(int j) const { return 2.0 * std::numbers::pi * j / n_; }
double CircleGrid::weight() const { return 2.0 * std::numbers::pi / n_; }

std::vector<double> CircleGrid::sample(double (*fn)(double)) const {
  return sample_with([fn](double p) { return fn(p); });
}

std::vector<double> CircleGrid::derivative(std::span<const double> values, int order) const {
  if (static_cast<int>(values.size()) != n_) throw GridMismatch("circle field has the wrong length");
  const int half = n_ / 2 + 1;
  std::vector<std::complex<double>> c(half);
  auto* spec = reinterpret_cast<fftw_complex*>(c.data());
  {
    std::vector<double> in(values.begin(), values.end());
    std::lock_guard lock(detail::fftw_planner_mutex());
    fftw_plan p = fftw_plan_dft_r2c_1d(n_, in.data(), spec, FFTW_ESTIMATE);
    fftw_execute(p);
    fftw_destroy_plan(p);
  }
  for (int m = 0; m < half; ++m) {
    std::complex<double> factor = std::pow(std::complex<double>(0.0, m), order) / static_cast<double>(n_);
    if (m == n_ / 2 && order % 2 == 1) factor = 0.0;
    c[m] *= factor;
  }
  std::vector<double> out(n_);
  std::lock_guard lock(detail::fftw_planner_mutex());
  fftw_plan p = fftw_plan_dft_c2r_1d(n_, spec, out.data(), FFTW_ESTIMATE);
  fftw_execute(p);
  fftw_destroy_plan(p);
  return out;
}

double CircleGrid::integrate(std::span<const double> values) const {
  double sum = 0.0;
  for (double v : values) sum += v;
  return sum * weight();
}

CurveGeometry curve_geometry(const CircleGrid& grid, std::span<const double> f) {
  const auto d1 = grid.derivative(f, 1);
  const auto d2 = grid.derivative(f, 2);
  CurveGeometry out;
  const int n = grid.size();
  out.kappa.resize(n);
  out.length_density.resize(n);
  out.normal.resize(n);
  out.position.resize(n);
  const Eigen::Matrix<double, 1, 1> round = Eigen::Matrix<double, 1, 1>::Identity();
  for (int j = 0; j < n; ++j) {
    if (!(f[j] > 1e-8)) throw DegenerateSurface("curve radius must stay positive");
    Eigen::Matrix<double, 1, 1> D, M;
    D(0) = d1[j] / f[j];
    M(0) = d2[j] / f[j] - D(0) * D(0);
    const auto lg = local_geometry<1>(f[j], D, M, round);
    const Eigen::Vector2d p(std::cos(grid.phi(j)), std::sin(grid.phi(j)));
    const Eigen::Vector2d e(-p.y(), p.x());
    out.kappa[j] = lg.kappa[0];
    out.length_density[j] = lg.area_density;
    out.normal[j] = (p - D(0) * e) / lg.w;
    out.position[j] = f[j] * p;
  }
  return out;
}

}  // namespace icf
