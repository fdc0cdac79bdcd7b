#pragma once

#include <Eigen/Core>

#include <complex>
#include <cstddef>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace icf {

/// Node counts of the Gauss-Legendre x uniform-longitude tensor grid.
struct GridSpec {
  int n_theta = 32;
  int n_phi = 64;

  /// Throws InvalidArgument unless n_theta >= 8, n_phi >= 16 and n_phi is even.
  void validate() const;
  std::string str() const;  // "NTHETAxNPHI"
  static GridSpec parse(const std::string& text);

  friend bool operator==(const GridSpec&, const GridSpec&) = default;
};

class SphereGrid;
using GridPtr = std::shared_ptr<const SphereGrid>;

/// Real values on the nodes of a SphereGrid, stored row-major
/// (colatitude ring i, longitude j) -> i * n_phi + j.
class ScalarField {
 public:
  ScalarField() = default;
  explicit ScalarField(GridPtr grid, double fill = 0.0);
  ScalarField(GridPtr grid, std::vector<double> values);

  const GridPtr& grid() const { return grid_; }
  const GridSpec& spec() const;
  std::size_t size() const { return values_.size(); }

  std::span<const double> values() const { return values_; }
  std::span<double> values() { return values_; }

  double operator[](std::size_t k) const { return values_[k]; }
  double& operator[](std::size_t k) { return values_[k]; }
  double operator()(int i, int j) const;
  double& operator()(int i, int j);

  double max() const;
  double min() const;
  bool all_finite() const;

  ScalarField& operator+=(const ScalarField& other);
  ScalarField& operator-=(const ScalarField& other);
  ScalarField& operator*=(double s);

  /// Throws GridMismatch when the two fields live on different grids.
  void require_same_grid(const ScalarField& other) const;

 private:
  GridPtr grid_;
  std::vector<double> values_;
};

ScalarField operator+(ScalarField a, const ScalarField& b);
ScalarField operator-(ScalarField a, const ScalarField& b);
ScalarField operator*(double s, ScalarField a);

/// Covector (or vector) components in the (theta, phi) chart.
struct CovectorField {
  ScalarField theta;
  ScalarField phi;
};

/// Symmetric 2-tensor stored as its three independent chart components.
struct CovariantTensor2 {
  ScalarField tt;
  ScalarField tp;
  ScalarField pp;

  Eigen::Matrix2d at(std::size_t k) const {
    Eigen::Matrix2d m;
    m << tt[k], tp[k], tp[k], pp[k];
    return m;
  }
};

/// Raw chart partials of a scalar field.
struct PartialDerivatives {
  ScalarField t, p, tt, tp, pp;
};

/// Exponential roll-off on the top fraction of spherical-harmonic degrees.
struct SpectralFilter {
  bool enabled = true;
  double cutoff_fraction = 0.9;  // degrees above cutoff_fraction * L are damped
  double strength = 36.0;        // damping exponent at the top degree
  int order = 8;

  double factor(int degree, int max_degree) const;
};

/// Complex coefficients a_lm (m >= 0) of the orthonormal harmonic expansion
/// f = sum_l sum_{|m|<=l} a_lm Pbar_l^|m|(cos theta) e^{i m phi}.
struct HarmonicCoefficients {
  int max_degree = 0;
  int max_order = 0;
  std::vector<std::complex<double>> a;  // l * (max_order + 1) + m

  std::complex<double>& operator()(int l, int m);
  std::complex<double> operator()(int l, int m) const;
};

/// Evaluates a grid field at arbitrary directions: trigonometric interpolation
/// in longitude, local Lagrange interpolation along the meridian great circle.
class FieldInterpolant {
 public:
  double operator()(double theta, double phi) const;
  double at(const Eigen::Vector3d& direction) const;

 private:
  friend class SphereGrid;
  const SphereGrid* grid_ = nullptr;
  std::vector<std::complex<double>> coeffs_;  // per ring, n_phi/2 + 1 entries
  std::vector<double> ring_values_;
  double ring_value(int ring, double phi) const;
};

/// Discretization of the unit sphere: Gauss-Legendre colatitudes, uniform
/// longitudes, quadrature weights and covariant differential operators of the
/// round metric dtheta^2 + sin^2(theta) dphi^2.
///
/// Longitude derivatives are spectral (FFT). Colatitude derivatives use
/// finite-difference weights on the great circle through node (i, j) and its
/// antipodal meridian, so stencils continue smoothly across the poles.
class SphereGrid : public std::enable_shared_from_this<SphereGrid> {
 public:
  static constexpr int kDefaultStencilPoints = 11;

  /// Cached, shared instance for `spec`.
  static GridPtr make(const GridSpec& spec);

  SphereGrid(const GridSpec& spec, int stencil_points);
  ~SphereGrid();
  SphereGrid(const SphereGrid&) = delete;
  SphereGrid& operator=(const SphereGrid&) = delete;

  const GridSpec& spec() const { return spec_; }
  int n_theta() const { return spec_.n_theta; }
  int n_phi() const { return spec_.n_phi; }
  std::size_t size() const { return static_cast<std::size_t>(spec_.n_theta) * spec_.n_phi; }
  std::size_t index(int i, int j) const { return static_cast<std::size_t>(i) * spec_.n_phi + j; }
  int stencil_points() const { return stencil_points_; }

  double theta(int i) const { return theta_[i]; }
  double phi(int j) const { return phi_[j]; }
  double cos_theta(int i) const { return cos_theta_[i]; }
  double sin_theta(int i) const { return sin_theta_[i]; }
  double weight(int i, int j) const;
  const std::vector<double>& thetas() const { return theta_; }

  Eigen::Vector3d point(int i, int j) const;
  Eigen::Vector3d e_theta(int i, int j) const;
  Eigen::Vector3d e_phi(int i, int j) const;

  /// Smallest node spacing: colatitude gaps (including across the poles)
  /// and the equatorial longitude step.
  double min_spacing() const;

  ScalarField sample(const std::function<double(double theta, double phi)>& fn) const;
  ScalarField constant(double value) const;

  /// Quadrature sum_{ij} w_ij v_ij with a fixed, compensated reduction order.
  double integrate(const ScalarField& field) const;

  PartialDerivatives partials(const ScalarField& field) const;
  ScalarField d_theta(const ScalarField& field) const;
  ScalarField d_phi(const ScalarField& field) const;

  CovectorField gradient(const ScalarField& field) const;
  CovectorField contravariant_gradient(const ScalarField& field) const;
  ScalarField gradient_norm_sq(const ScalarField& field) const;
  CovariantTensor2 hessian(const ScalarField& field) const;
  CovariantTensor2 hessian(const PartialDerivatives& d) const;
  ScalarField laplacian(const ScalarField& field) const;

  int max_degree() const { return max_degree_; }
  int max_order() const { return max_order_; }
  HarmonicCoefficients analyze(const ScalarField& field) const;
  ScalarField synthesize(const HarmonicCoefficients& coeffs) const;
  /// Harmonic projection with the filter's roll-off applied.
  ScalarField project(const ScalarField& field, const SpectralFilter& filter) const;

  /// Orthonormal associated Legendre value Pbar_l^m(cos theta_i).
  double legendre(int l, int m, int ring) const;

  FieldInterpolant interpolant(const ScalarField& field) const;

  void require(const ScalarField& field) const;

 private:
  friend class FieldInterpolant;
  struct Fft;

  void build_nodes();
  void build_stencils();
  void build_legendre();
  double extended_value(std::span<const double> values, int ext, int j) const;
  double extended_psi(int ext) const;
  ScalarField apply_meridian_stencil(const ScalarField& field, int order) const;
  std::vector<std::complex<double>> forward_rings(std::span<const double> values) const;
  std::vector<double> inverse_rings(const std::vector<std::complex<double>>& coeffs) const;
  void drop_polar_noise(std::vector<std::complex<double>>& coeffs) const;

  GridSpec spec_;
  int stencil_points_;
  std::vector<double> theta_, cos_theta_, sin_theta_, gl_weight_, phi_;
  // Meridian stencils: for ring i, extended great-circle indices and the
  // first/second derivative weights at theta_i.
  std::vector<std::vector<int>> stencil_index_;
  std::vector<std::vector<double>> stencil_d1_, stencil_d2_;
  int max_degree_ = 0;
  int max_order_ = 0;
  std::vector<std::size_t> legendre_offset_;  // per m
  std::vector<double> legendre_;              // [(m, l - m), ring]
  // Per ring, the first longitudinal mode that no band-limited field can
  // excite above round-off; higher modes are dropped before phi derivatives.
  std::vector<int> phi_mode_limit_;
  std::unique_ptr<Fft> fft_;
};

/// Finite-difference weights (Fornberg) for derivatives 0..max_order at x0.
/// Row k holds the weights of the k-th derivative.
Eigen::MatrixXd fornberg_weights(double x0, std::span<const double> nodes, int max_order);

}  // namespace icf
