#include "icf/sphere_grid.hpp"

#include "icf/errors.hpp"
#include "fftw_lock.hpp"

#include <boost/math/special_functions/legendre.hpp>
#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <sstream>

namespace icf {

std::mutex& detail::fftw_planner_mutex() {
  static std::mutex m;
  return m;
}

namespace {

constexpr double kPi = std::numbers::pi;
// Relative size below which a longitudinal mode on a ring is round-off only.
constexpr double kPolarModeFloor = 1e-16;

/// Neumaier-compensated running sum.
class CompensatedSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      c_ += (sum_ - t) + x;
    } else {
      c_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + c_; }

 private:
  double sum_ = 0.0;
  double c_ = 0.0;
};

}  // namespace

// ---------------------------------------------------------------------------
// GridSpec

void GridSpec::validate() const {
  if (n_theta < 8) throw InvalidArgument("grid: n_theta must be >= 8, got " + std::to_string(n_theta));
  if (n_phi < 16) throw InvalidArgument("grid: n_phi must be >= 16, got " + std::to_string(n_phi));
  if (n_phi % 2 != 0) throw InvalidArgument("grid: n_phi must be even, got " + std::to_string(n_phi));
}

std::string GridSpec::str() const { return std::to_string(n_theta) + "x" + std::to_string(n_phi); }

GridSpec GridSpec::parse(const std::string& text) {
  const auto x = text.find_first_of("xX");
  if (x == std::string::npos) throw InputError("grid must look like NTHETAxNPHI, got '" + text + "'");
  GridSpec spec;
  try {
    std::size_t used = 0;
    spec.n_theta = std::stoi(text.substr(0, x), &used);
    if (used != x) throw std::invalid_argument("trailing");
    const std::string rest = text.substr(x + 1);
    spec.n_phi = std::stoi(rest, &used);
    if (used != rest.size()) throw std::invalid_argument("trailing");
  } catch (const std::exception&) {
    throw InputError("grid must look like NTHETAxNPHI, got '" + text + "'");
  }
  spec.validate();
  return spec;
}

// ---------------------------------------------------------------------------
// ScalarField

ScalarField::ScalarField(GridPtr grid, double fill) : grid_(std::move(grid)) {
  if (!grid_) throw InvalidArgument("ScalarField: null grid");
  values_.assign(grid_->size(), fill);
}

ScalarField::ScalarField(GridPtr grid, std::vector<double> values)
    : grid_(std::move(grid)), values_(std::move(values)) {
  if (!grid_) throw InvalidArgument("ScalarField: null grid");
  if (values_.size() != grid_->size()) {
    throw GridMismatch("ScalarField: expected " + std::to_string(grid_->size()) + " values, got " +
                       std::to_string(values_.size()));
  }
}

const GridSpec& ScalarField::spec() const { return grid_->spec(); }

double ScalarField::operator()(int i, int j) const { return values_[grid_->index(i, j)]; }
double& ScalarField::operator()(int i, int j) { return values_[grid_->index(i, j)]; }

double ScalarField::max() const { return *std::max_element(values_.begin(), values_.end()); }
double ScalarField::min() const { return *std::min_element(values_.begin(), values_.end()); }

bool ScalarField::all_finite() const {
  return std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); });
}

void ScalarField::require_same_grid(const ScalarField& other) const {
  if (!grid_ || !other.grid_ || !(grid_->spec() == other.grid_->spec())) {
    throw GridMismatch("fields live on different grids");
  }
}

ScalarField& ScalarField::operator+=(const ScalarField& other) {
  require_same_grid(other);
  for (std::size_t k = 0; k < values_.size(); ++k) values_[k] += other.values_[k];
  return *this;
}

ScalarField& ScalarField::operator-=(const ScalarField& other) {
  require_same_grid(other);
  for (std::size_t k = 0; k < values_.size(); ++k) values_[k] -= other.values_[k];
  return *this;
}

ScalarField& ScalarField::operator*=(double s) {
  for (double& v : values_) v *= s;
  return *this;
}

ScalarField operator+(ScalarField a, const ScalarField& b) { return a += b; }
ScalarField operator-(ScalarField a, const ScalarField& b) { return a -= b; }
ScalarField operator*(double s, ScalarField a) { return a *= s; }

// ---------------------------------------------------------------------------
// SpectralFilter / HarmonicCoefficients

double SpectralFilter::factor(int degree, int max_degree) const {
  if (!enabled) return 1.0;
  const double cutoff = cutoff_fraction * max_degree;
  if (degree <= cutoff || max_degree <= cutoff) return 1.0;
  const double eta = (degree - cutoff) / (max_degree - cutoff);
  return std::exp(-strength * std::pow(eta, order));
}

std::complex<double>& HarmonicCoefficients::operator()(int l, int m) {
  return a[static_cast<std::size_t>(l) * (max_order + 1) + m];
}

std::complex<double> HarmonicCoefficients::operator()(int l, int m) const {
  return a[static_cast<std::size_t>(l) * (max_order + 1) + m];
}

// ---------------------------------------------------------------------------
// FFT plans (one batch of ring transforms in each direction)

struct SphereGrid::Fft {
  fftw_plan forward = nullptr;
  fftw_plan backward = nullptr;

  Fft(int rings, int n) {
    std::lock_guard lock(detail::fftw_planner_mutex());
    const int half = n / 2 + 1;
    std::vector<double> real(static_cast<std::size_t>(rings) * n);
    auto* spec = fftw_alloc_complex(static_cast<std::size_t>(rings) * half);
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    forward = fftw_plan_many_dft_r2c(1, &n, rings, real.data(), nullptr, 1, n, spec, nullptr, 1, half, flags);
    backward = fftw_plan_many_dft_c2r(1, &n, rings, spec, nullptr, 1, half, real.data(), nullptr, 1, n, flags);
    fftw_free(spec);
  }
  ~Fft() {
    std::lock_guard lock(detail::fftw_planner_mutex());
    fftw_destroy_plan(forward);
    fftw_destroy_plan(backward);
  }
};

// ---------------------------------------------------------------------------
// SphereGrid

GridPtr SphereGrid::make(const GridSpec& spec) {
  spec.validate();
  static std::mutex mutex;
  static std::map<std::pair<int, int>, GridPtr> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[{spec.n_theta, spec.n_phi}];
  if (!slot) {
    int points = std::min(kDefaultStencilPoints, spec.n_theta);
    if (points % 2 == 0) --points;
    slot = std::make_shared<const SphereGrid>(spec, points);
  }
  return slot;
}

SphereGrid::SphereGrid(const GridSpec& spec, int stencil_points)
    : spec_(spec), stencil_points_(stencil_points) {
  spec_.validate();
  if (stencil_points_ < 3 || stencil_points_ % 2 == 0 || stencil_points_ > spec_.n_theta) {
    throw InvalidArgument("stencil_points must be odd, >= 3 and <= n_theta");
  }
  build_nodes();
  build_stencils();
  build_legendre();
  fft_ = std::make_unique<Fft>(spec_.n_theta, spec_.n_phi);
}

SphereGrid::~SphereGrid() = default;

void SphereGrid::build_nodes() {
  const int n = spec_.n_theta;
  const auto zeros = boost::math::legendre_p_zeros<double>(n);  // nonnegative roots, ascending
  std::vector<double> x;
  for (double z : zeros) {
    if (z > 0.0) {
      x.push_back(z);
      x.push_back(-z);
    } else {
      x.push_back(0.0);
    }
  }
  std::sort(x.begin(), x.end(), std::greater<>());  // theta ascending
  theta_.resize(n);
  cos_theta_.resize(n);
  sin_theta_.resize(n);
  gl_weight_.resize(n);
  for (int i = 0; i < n; ++i) {
    const double xi = x[i];
    const double dp = boost::math::legendre_p_prime(n, xi);
    theta_[i] = std::acos(xi);
    cos_theta_[i] = xi;
    sin_theta_[i] = std::sin(theta_[i]);
    gl_weight_[i] = 2.0 / ((1.0 - xi * xi) * dp * dp);
  }
  phi_.resize(spec_.n_phi);
  for (int j = 0; j < spec_.n_phi; ++j) phi_[j] = 2.0 * kPi * j / spec_.n_phi;
}

double SphereGrid::extended_psi(int ext) const {
  const int n = spec_.n_theta;
  const int period = 2 * n;
  const int wraps = ext >= 0 ? ext / period : -((-ext + period - 1) / period);
  const int k = ext - wraps * period;
  const double base = k < n ? theta_[k] : 2.0 * kPi - theta_[period - 1 - k];
  return base + 2.0 * kPi * wraps;
}

double SphereGrid::extended_value(std::span<const double> values, int ext, int j) const {
  const int n = spec_.n_theta;
  const int period = 2 * n;
  int k = ext % period;
  if (k < 0) k += period;
  if (k < n) return values[index(k, j)];
  const int jj = (j + spec_.n_phi / 2) % spec_.n_phi;
  return values[index(period - 1 - k, jj)];
}

void SphereGrid::build_stencils() {
  const int n = spec_.n_theta;
  const int half = stencil_points_ / 2;
  stencil_index_.assign(n, {});
  stencil_d1_.assign(n, {});
  stencil_d2_.assign(n, {});
  std::vector<double> psi(stencil_points_);
  for (int i = 0; i < n; ++i) {
    auto& idx = stencil_index_[i];
    for (int s = -half; s <= half; ++s) idx.push_back(i + s);
    for (int s = 0; s < stencil_points_; ++s) psi[s] = extended_psi(idx[s]);
    const Eigen::MatrixXd w = fornberg_weights(theta_[i], psi, 2);
    auto& d1 = stencil_d1_[i];
    auto& d2 = stencil_d2_[i];
    d1.resize(stencil_points_);
    d2.resize(stencil_points_);
    double s1 = 0.0, s2 = 0.0;
    for (int s = 0; s < stencil_points_; ++s) {
      d1[s] = w(1, s);
      d2[s] = w(2, s);
      if (s != half) {
        s1 += d1[s];
        s2 += d2[s];
      }
    }
    // Derivatives of constants vanish exactly.
    d1[half] = -s1;
    d2[half] = -s2;
  }
}

void SphereGrid::build_legendre() {
  const int n = spec_.n_theta;
  max_degree_ = n - 1;
  max_order_ = std::min(max_degree_, spec_.n_phi / 2 - 1);
  legendre_offset_.assign(max_order_ + 2, 0);
  for (int m = 0; m <= max_order_; ++m) {
    legendre_offset_[m + 1] = legendre_offset_[m] + static_cast<std::size_t>(max_degree_ - m + 1) * n;
  }
  legendre_.assign(legendre_offset_[max_order_ + 1], 0.0);
  for (int i = 0; i < n; ++i) {
    const double x = cos_theta_[i];
    const double s = sin_theta_[i];
    double pmm = std::sqrt(1.0 / (4.0 * kPi));
    for (int m = 0; m <= max_order_; ++m) {
      if (m > 0) pmm *= std::sqrt((2.0 * m + 1.0) / (2.0 * m)) * s;
      auto at = [&](int l) -> double& { return legendre_[legendre_offset_[m] + static_cast<std::size_t>(l - m) * n + i]; };
      at(m) = pmm;
      if (m + 1 <= max_degree_) at(m + 1) = std::sqrt(2.0 * m + 3.0) * x * pmm;
      for (int l = m + 2; l <= max_degree_; ++l) {
        const double ll = l, mm = m;
        const double a = std::sqrt((4.0 * ll * ll - 1.0) / (ll * ll - mm * mm));
        const double b = std::sqrt(((ll - 1.0) * (ll - 1.0) - mm * mm) / (4.0 * (ll - 1.0) * (ll - 1.0) - 1.0));
        at(l) = a * (x * at(l - 1) - b * at(l - 2));
      }
    }
  }
  phi_mode_limit_.assign(n, spec_.n_phi / 2 + 1);
  for (int i = 0; i < n; ++i) {
    double ring_max = 0.0;
    std::vector<double> mode_max(max_order_ + 1, 0.0);
    for (int m = 0; m <= max_order_; ++m) {
      for (int l = m; l <= max_degree_; ++l) mode_max[m] = std::max(mode_max[m], std::abs(legendre(l, m, i)));
      ring_max = std::max(ring_max, mode_max[m]);
    }
    for (int m = 1; m <= max_order_; ++m) {
      if (mode_max[m] < kPolarModeFloor * ring_max) {
        phi_mode_limit_[i] = m;
        break;
      }
    }
  }
}

void SphereGrid::drop_polar_noise(std::vector<std::complex<double>>& coeffs) const {
  const int half = spec_.n_phi / 2 + 1;
  for (int i = 0; i < spec_.n_theta; ++i) {
    for (int m = phi_mode_limit_[i]; m < half; ++m) coeffs[static_cast<std::size_t>(i) * half + m] = 0.0;
  }
}

double SphereGrid::legendre(int l, int m, int ring) const {
  if (m < 0 || m > max_order_ || l < m || l > max_degree_) {
    throw InvalidArgument("legendre: (l, m) outside the grid's band limit");
  }
  return legendre_[legendre_offset_[m] + static_cast<std::size_t>(l - m) * spec_.n_theta + ring];
}

double SphereGrid::weight(int i, int /*j*/) const { return gl_weight_[i] * 2.0 * kPi / spec_.n_phi; }

Eigen::Vector3d SphereGrid::point(int i, int j) const {
  return {sin_theta_[i] * std::cos(phi_[j]), sin_theta_[i] * std::sin(phi_[j]), cos_theta_[i]};
}

Eigen::Vector3d SphereGrid::e_theta(int i, int j) const {
  return {cos_theta_[i] * std::cos(phi_[j]), cos_theta_[i] * std::sin(phi_[j]), -sin_theta_[i]};
}

Eigen::Vector3d SphereGrid::e_phi(int /*i*/, int j) const { return {-std::sin(phi_[j]), std::cos(phi_[j]), 0.0}; }

double SphereGrid::min_spacing() const {
  double h = 2.0 * kPi / spec_.n_phi;
  const int n = spec_.n_theta;
  for (int k = 0; k < 2 * n; ++k) h = std::min(h, extended_psi(k + 1) - extended_psi(k));
  return h;
}

void SphereGrid::require(const ScalarField& field) const {
  if (!field.grid() || !(field.spec() == spec_)) {
    throw GridMismatch("field grid " + (field.grid() ? field.spec().str() : std::string("<none>")) +
                       " does not match " + spec_.str());
  }
}

ScalarField SphereGrid::sample(const std::function<double(double, double)>& fn) const {
  ScalarField out(shared_from_this());
  for (int i = 0; i < spec_.n_theta; ++i)
    for (int j = 0; j < spec_.n_phi; ++j) out(i, j) = fn(theta_[i], phi_[j]);
  return out;
}

ScalarField SphereGrid::constant(double value) const { return ScalarField(shared_from_this(), value); }

double SphereGrid::integrate(const ScalarField& field) const {
  require(field);
  CompensatedSum sum;
  const double dphi = 2.0 * kPi / spec_.n_phi;
  for (int i = 0; i < spec_.n_theta; ++i) {
    CompensatedSum ring;
    for (int j = 0; j < spec_.n_phi; ++j) ring.add(field(i, j));
    sum.add(gl_weight_[i] * dphi * ring.value());
  }
  return sum.value();
}

std::vector<std::complex<double>> SphereGrid::forward_rings(std::span<const double> values) const {
  const int half = spec_.n_phi / 2 + 1;
  std::vector<double> in(values.begin(), values.end());
  std::vector<std::complex<double>> out(static_cast<std::size_t>(spec_.n_theta) * half);
  fftw_execute_dft_r2c(fft_->forward, in.data(), reinterpret_cast<fftw_complex*>(out.data()));
  return out;
}

std::vector<double> SphereGrid::inverse_rings(const std::vector<std::complex<double>>& coeffs) const {
  std::vector<std::complex<double>> in = coeffs;  // c2r overwrites its input
  std::vector<double> out(size());
  fftw_execute_dft_c2r(fft_->backward, reinterpret_cast<fftw_complex*>(in.data()), out.data());
  return out;
}

ScalarField SphereGrid::d_phi(const ScalarField& field) const {
  require(field);
  const int n = spec_.n_phi;
  const int half = n / 2 + 1;
  auto c = forward_rings(field.values());
  drop_polar_noise(c);
  for (int i = 0; i < spec_.n_theta; ++i) {
    for (int m = 0; m < half; ++m) {
      auto& z = c[static_cast<std::size_t>(i) * half + m];
      z = (m == n / 2) ? 0.0 : z * std::complex<double>(0.0, m) / static_cast<double>(n);
    }
  }
  return ScalarField(shared_from_this(), inverse_rings(c));
}

ScalarField SphereGrid::apply_meridian_stencil(const ScalarField& field, int order) const {
  require(field);
  ScalarField out(shared_from_this());
  const auto values = field.values();
  const int n = spec_.n_theta, np = spec_.n_phi, half = np / 2, period = 2 * n;
  auto dst = out.values();
  for (int i = 0; i < n; ++i) {
    const auto& idx = stencil_index_[i];
    const auto& w = order == 1 ? stencil_d1_[i] : stencil_d2_[i];
    double* row_out = dst.data() + index(i, 0);
    for (int s = 0; s < stencil_points_; ++s) {
      int k = idx[s] % period;
      if (k < 0) k += period;
      const double ws = w[s];
      if (k < n) {
        const double* src = values.data() + index(k, 0);
        for (int j = 0; j < np; ++j) row_out[j] += ws * src[j];
      } else {
        // Antipodal meridian: longitude shifted by pi.
        const double* src = values.data() + index(period - 1 - k, 0);
        for (int j = 0; j < half; ++j) row_out[j] += ws * src[j + half];
        for (int j = half; j < np; ++j) row_out[j] += ws * src[j - half];
      }
    }
  }
  return out;
}

ScalarField SphereGrid::d_theta(const ScalarField& field) const { return apply_meridian_stencil(field, 1); }

PartialDerivatives SphereGrid::partials(const ScalarField& field) const {
  require(field);
  const int n = spec_.n_phi;
  const int half = n / 2 + 1;
  auto c = forward_rings(field.values());
  drop_polar_noise(c);
  auto c1 = c;
  auto c2 = c;
  for (int i = 0; i < spec_.n_theta; ++i) {
    for (int m = 0; m < half; ++m) {
      const std::size_t k = static_cast<std::size_t>(i) * half + m;
      c1[k] = (m == n / 2) ? 0.0 : c[k] * std::complex<double>(0.0, m) / static_cast<double>(n);
      c2[k] = c[k] * (-static_cast<double>(m) * m / n);
    }
  }
  PartialDerivatives d{
      apply_meridian_stencil(field, 1),
      ScalarField(shared_from_this(), inverse_rings(c1)),
      apply_meridian_stencil(field, 2),
      ScalarField(shared_from_this()),
      ScalarField(shared_from_this(), inverse_rings(c2)),
  };
  d.tp = apply_meridian_stencil(d.p, 1);
  return d;
}

CovectorField SphereGrid::gradient(const ScalarField& field) const { return {d_theta(field), d_phi(field)}; }

CovectorField SphereGrid::contravariant_gradient(const ScalarField& field) const {
  auto g = gradient(field);
  for (int i = 0; i < spec_.n_theta; ++i) {
    const double s2 = sin_theta_[i] * sin_theta_[i];
    for (int j = 0; j < spec_.n_phi; ++j) g.phi(i, j) /= s2;
  }
  return g;
}

ScalarField SphereGrid::gradient_norm_sq(const ScalarField& field) const {
  const auto g = gradient(field);
  ScalarField out(shared_from_this());
  for (int i = 0; i < spec_.n_theta; ++i) {
    const double s2 = sin_theta_[i] * sin_theta_[i];
    for (int j = 0; j < spec_.n_phi; ++j) {
      out(i, j) = g.theta(i, j) * g.theta(i, j) + g.phi(i, j) * g.phi(i, j) / s2;
    }
  }
  return out;
}

CovariantTensor2 SphereGrid::hessian(const ScalarField& field) const { return hessian(partials(field)); }

CovariantTensor2 SphereGrid::hessian(const PartialDerivatives& d) const {
  CovariantTensor2 h{d.tt, d.tp, d.pp};
  for (int i = 0; i < spec_.n_theta; ++i) {
    const double s = sin_theta_[i], c = cos_theta_[i];
    for (int j = 0; j < spec_.n_phi; ++j) {
      h.tp(i, j) -= (c / s) * d.p(i, j);    // Gamma^phi_{theta phi} = cot(theta)
      h.pp(i, j) += s * c * d.t(i, j);      // Gamma^theta_{phi phi} = -sin cos
    }
  }
  return h;
}

ScalarField SphereGrid::laplacian(const ScalarField& field) const {
  const auto d = partials(field);
  ScalarField out(shared_from_this());
  for (int i = 0; i < spec_.n_theta; ++i) {
    const double s = sin_theta_[i], c = cos_theta_[i];
    for (int j = 0; j < spec_.n_phi; ++j) {
      out(i, j) = d.tt(i, j) + (c / s) * d.t(i, j) + d.pp(i, j) / (s * s);
    }
  }
  return out;
}

HarmonicCoefficients SphereGrid::analyze(const ScalarField& field) const {
  require(field);
  const int n = spec_.n_theta;
  const int half = spec_.n_phi / 2 + 1;
  const auto c = forward_rings(field.values());
  HarmonicCoefficients out{max_degree_, max_order_, {}};
  out.a.assign(static_cast<std::size_t>(max_degree_ + 1) * (max_order_ + 1), 0.0);
  const double dphi = 2.0 * kPi / spec_.n_phi;
  for (int m = 0; m <= max_order_; ++m) {
    for (int l = m; l <= max_degree_; ++l) {
      std::complex<double> acc = 0.0;
      const double* p = &legendre_[legendre_offset_[m] + static_cast<std::size_t>(l - m) * n];
      for (int i = 0; i < n; ++i) acc += gl_weight_[i] * p[i] * c[static_cast<std::size_t>(i) * half + m];
      out(l, m) = acc * dphi;
    }
  }
  return out;
}

ScalarField SphereGrid::synthesize(const HarmonicCoefficients& coeffs) const {
  if (coeffs.max_degree != max_degree_ || coeffs.max_order != max_order_) {
    throw GridMismatch("harmonic coefficients do not match the grid band limit");
  }
  const int n = spec_.n_theta;
  const int half = spec_.n_phi / 2 + 1;
  std::vector<std::complex<double>> c(static_cast<std::size_t>(n) * half, 0.0);
  for (int m = 0; m <= max_order_; ++m) {
    for (int l = m; l <= max_degree_; ++l) {
      const auto a = coeffs(l, m);
      if (a == 0.0) continue;
      const double* p = &legendre_[legendre_offset_[m] + static_cast<std::size_t>(l - m) * n];
      for (int i = 0; i < n; ++i) c[static_cast<std::size_t>(i) * half + m] += a * p[i];
    }
  }
  return ScalarField(shared_from_this(), inverse_rings(c));
}

ScalarField SphereGrid::project(const ScalarField& field, const SpectralFilter& filter) const {
  auto coeffs = analyze(field);
  for (int l = 0; l <= max_degree_; ++l) {
    const double f = filter.factor(l, max_degree_);
    if (f == 1.0) continue;
    for (int m = 0; m <= std::min(l, max_order_); ++m) coeffs(l, m) *= f;
  }
  return synthesize(coeffs);
}

FieldInterpolant SphereGrid::interpolant(const ScalarField& field) const {
  require(field);
  FieldInterpolant out;
  out.grid_ = this;
  out.coeffs_ = forward_rings(field.values());
  const double inv = 1.0 / spec_.n_phi;
  for (auto& z : out.coeffs_) z *= inv;
  out.ring_values_.assign(field.values().begin(), field.values().end());
  return out;
}

// ---------------------------------------------------------------------------
// FieldInterpolant

double FieldInterpolant::ring_value(int ring, double phi) const {
  const int n = grid_->n_phi();
  const double node = phi * n / (2.0 * kPi);
  const double nearest = std::round(node);
  if (std::abs(node - nearest) < 1e-12) {
    int j = static_cast<int>(std::fmod(nearest, n));
    if (j < 0) j += n;
    return ring_values_[grid_->index(ring, j)];
  }
  const int half = n / 2 + 1;
  const std::complex<double>* c = &coeffs_[static_cast<std::size_t>(ring) * half];
  const std::complex<double> step(std::cos(phi), std::sin(phi));
  std::complex<double> e = step;
  double acc = c[0].real();
  for (int m = 1; m < n / 2; ++m) {
    acc += 2.0 * (c[m] * e).real();
    e *= step;
  }
  acc += c[n / 2].real() * std::cos(0.5 * n * phi);
  return acc;
}

double FieldInterpolant::operator()(double theta, double phi) const {
  const auto& g = *grid_;
  const int n = g.n_theta();
  theta = std::clamp(theta, 0.0, kPi);
  const auto& th = g.thetas();
  // Exact node hit: longitude interpolation only.
  const auto it = std::lower_bound(th.begin(), th.end(), theta);
  if (it != th.end() && *it == theta) return ring_value(static_cast<int>(it - th.begin()), phi);
  const int below = static_cast<int>(it - th.begin()) - 1;  // may be -1 near the north pole
  const int points = g.stencil_points() + 1;
  const int first = below - points / 2 + 1;
  std::vector<double> psi(points), val(points);
  for (int s = 0; s < points; ++s) {
    const int ext = first + s;
    psi[s] = g.extended_psi(ext);
    int k = ext % (2 * n);
    if (k < 0) k += 2 * n;
    val[s] = k < n ? ring_value(k, phi) : ring_value(2 * n - 1 - k, phi + kPi);
  }
  double acc = 0.0;
  for (int s = 0; s < points; ++s) {
    double l = 1.0;
    for (int t = 0; t < points; ++t) {
      if (t != s) l *= (theta - psi[t]) / (psi[s] - psi[t]);
    }
    acc += l * val[s];
  }
  return acc;
}

double FieldInterpolant::at(const Eigen::Vector3d& d) const {
  const double theta = std::atan2(std::hypot(d.x(), d.y()), d.z());
  const double phi = std::atan2(d.y(), d.x());
  return (*this)(theta, phi);
}

// ---------------------------------------------------------------------------

Eigen::MatrixXd fornberg_weights(double x0, std::span<const double> x, int max_order) {
  const int n = static_cast<int>(x.size());
  Eigen::MatrixXd c = Eigen::MatrixXd::Zero(max_order + 1, n);
  double c1 = 1.0;
  double c4 = x[0] - x0;
  c(0, 0) = 1.0;
  for (int i = 1; i < n; ++i) {
    const int mn = std::min(i, max_order);
    double c2 = 1.0;
    const double c5 = c4;
    c4 = x[i] - x0;
    for (int j = 0; j < i; ++j) {
      const double c3 = x[i] - x[j];
      c2 *= c3;
      if (j == i - 1) {
        for (int k = mn; k >= 1; --k) c(k, i) = c1 * (k * c(k - 1, i - 1) - c5 * c(k, i - 1)) / c2;
        c(0, i) = -c1 * c5 * c(0, i - 1) / c2;
      }
      for (int k = mn; k >= 1; --k) c(k, j) = (c4 * c(k, j) - k * c(k - 1, j)) / c3;
      c(0, j) = c4 * c(0, j) / c3;
    }
    c1 = c2;
  }
  return c;
}

}  // namespace icf
