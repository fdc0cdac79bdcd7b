#include "icf/speed.hpp"

#include "icf/errors.hpp"
#include "icf/local_geometry.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

namespace icf {

namespace {

/// sigma_{k-1} of kappa with entry i removed, i.e. d sigma_k / d kappa_i.
double sigma_without(std::span<const double> kappa, int k, std::size_t i) {
  std::vector<double> rest;
  rest.reserve(kappa.size());
  for (std::size_t m = 0; m < kappa.size(); ++m)
    if (m != i) rest.push_back(kappa[m]);
  return elementary_symmetric(rest, k - 1);
}

std::vector<double> sigma_gradient(std::span<const double> kappa, int k) {
  std::vector<double> g(kappa.size());
  for (std::size_t i = 0; i < kappa.size(); ++i) g[i] = sigma_without(kappa, k, i);
  return g;
}

int parse_int(const std::string& s, const std::string& whole) {
  try {
    std::size_t used = 0;
    const int v = std::stoi(s, &used);
    if (used != s.size()) throw std::invalid_argument("trailing");
    return v;
  } catch (const std::exception&) {
    throw InputError("cannot parse speed '" + whole + "'");
  }
}

}  // namespace

SpeedFunction SpeedFunction::mean_curvature() { return {Kind::mean_curvature, 1, 0}; }

SpeedFunction SpeedFunction::quotient(int k) {
  if (k < 1) throw InvalidArgument("quotient speed needs k >= 1");
  return {Kind::quotient, k, k - 1};
}

SpeedFunction SpeedFunction::power(int k) {
  if (k < 1) throw InvalidArgument("power speed needs k >= 1");
  return {Kind::power, k, 0};
}

SpeedFunction SpeedFunction::ratio(int i, int j) {
  if (!(i > j && j >= 0)) throw InvalidArgument("ratio speed needs i > j >= 0");
  return {Kind::ratio, i, j};
}

SpeedFunction SpeedFunction::parse(const std::string& text) {
  if (text == "H") return mean_curvature();
  const auto colon = text.find(':');
  if (colon == std::string::npos) throw InputError("unknown speed '" + text + "'");
  const std::string head = text.substr(0, colon), tail = text.substr(colon + 1);
  try {
    if (head == "quotient") return quotient(parse_int(tail, text));
    if (head == "power") return power(parse_int(tail, text));
    if (head == "ratio") {
      const auto comma = tail.find(',');
      if (comma == std::string::npos) throw InputError("ratio speed must look like ratio:i,j");
      return ratio(parse_int(tail.substr(0, comma), text), parse_int(tail.substr(comma + 1), text));
    }
  } catch (const InvalidArgument& e) {
    throw InputError(e.what());
  }
  throw InputError("unknown speed '" + text + "'");
}

std::string SpeedFunction::name() const {
  switch (kind_) {
    case Kind::mean_curvature: return "H";
    case Kind::quotient: return "quotient:" + std::to_string(i_);
    case Kind::power: return "power:" + std::to_string(i_);
    case Kind::ratio: return "ratio:" + std::to_string(i_) + "," + std::to_string(j_);
  }
  return "?";
}

int SpeedFunction::order() const { return i_; }

void SpeedFunction::validate(int n) const {
  if (order() > n) {
    throw InvalidArgument("speed " + name() + " needs sigma_" + std::to_string(order()) + " but n = " +
                          std::to_string(n));
  }
}

double SpeedFunction::operator()(std::span<const double> kappa) const {
  const auto s = elementary_symmetric(kappa);
  switch (kind_) {
    case Kind::mean_curvature: return s[1];
    case Kind::quotient: return s[i_] / s[i_ - 1];
    case Kind::power: return std::pow(s[i_], 1.0 / i_);
    case Kind::ratio: return std::pow(s[i_] / s[j_], 1.0 / (i_ - j_));
  }
  return 0.0;
}

std::vector<double> SpeedFunction::gradient(std::span<const double> kappa) const {
  const auto s = elementary_symmetric(kappa);
  std::vector<double> g(kappa.size(), 1.0);
  switch (kind_) {
    case Kind::mean_curvature:
      break;
    case Kind::quotient: {
      const auto a = sigma_gradient(kappa, i_);
      const auto b = sigma_gradient(kappa, i_ - 1);
      for (std::size_t m = 0; m < g.size(); ++m) g[m] = (a[m] * s[i_ - 1] - s[i_] * b[m]) / (s[i_ - 1] * s[i_ - 1]);
      break;
    }
    case Kind::power: {
      const auto a = sigma_gradient(kappa, i_);
      const double factor = std::pow(s[i_], 1.0 / i_ - 1.0) / i_;
      for (std::size_t m = 0; m < g.size(); ++m) g[m] = factor * a[m];
      break;
    }
    case Kind::ratio: {
      const auto a = sigma_gradient(kappa, i_);
      const auto b = sigma_gradient(kappa, j_);
      const double rho = (*this)(kappa);
      for (std::size_t m = 0; m < g.size(); ++m) {
        g[m] = rho / (i_ - j_) * (a[m] / s[i_] - (j_ == 0 ? 0.0 : b[m] / s[j_]));
      }
      break;
    }
  }
  return g;
}

bool SpeedFunction::in_cone(std::span<const double> kappa) const {
  const auto s = elementary_symmetric(kappa);
  for (int l = 1; l <= order(); ++l) {
    if (l >= static_cast<int>(s.size()) || !(s[l] > 0.0)) return false;
  }
  return true;
}

double SpeedFunction::mu(int n) const {
  const std::vector<double> ones(n, 1.0);
  return (*this)(ones);
}

CurvatureFunction as_curvature_function(const SpeedFunction& speed) {
  return {speed.name(), [speed](std::span<const double> k) { return speed(k); },
          [speed](std::span<const double> k) { return speed.in_cone(k); }};
}

CurvatureFunction norm_of_second_fundamental_form() {
  return {"|A|",
          [](std::span<const double> k) {
            double s = 0.0;
            for (double v : k) s += v * v;
            return std::sqrt(s);
          },
          [](std::span<const double> k) { return std::all_of(k.begin(), k.end(), [](double v) { return v > 0.0; }); }};
}

// ---------------------------------------------------------------------------

namespace {

std::string describe(std::span<const double> k) {
  std::ostringstream s;
  s.precision(6);
  s << "(";
  for (std::size_t i = 0; i < k.size(); ++i) s << (i ? ", " : "") << k[i];
  s << ")";
  return s.str();
}

}  // namespace

ClassCReport class_c_audit(const CurvatureFunction& fn, int n, int samples, std::uint64_t seed) {
  constexpr double kMargin = 0.2;       // distance kept from the cone boundary (unit-norm kappa)
  constexpr double kHessStep = 1e-3;
  constexpr double kGradStep = 1e-6;
  constexpr double kHessTol = 1e-8;
  constexpr std::size_t kMaxFailures = 5;

  ClassCReport rep;
  rep.name = fn.name;
  rep.min_gradient = std::numeric_limits<double>::infinity();
  rep.max_hessian_eigenvalue = -std::numeric_limits<double>::infinity();
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> N01;
  auto fail = [&](const std::string& what) {
    if (rep.failures.size() < kMaxFailures) rep.failures.push_back(what);
  };

  std::vector<double> k(n), probe(n);
  auto inside = [&](const std::vector<double>& x) {
    // Cone membership of the margin-ball vertices around x.
    for (int i = 0; i < n; ++i) {
      for (double s : {-kMargin, kMargin}) {
        probe = x;
        probe[i] += s;
        if (!fn.cone(probe)) return false;
      }
    }
    probe = x;
    for (int i = 0; i < n; ++i) probe[i] -= kMargin / std::sqrt(static_cast<double>(n));
    return fn.cone(x) && fn.cone(probe);
  };

  int accepted = 0;
  for (long attempt = 0; accepted < samples && attempt < 1000L * samples; ++attempt) {
    double norm = 0.0;
    for (auto& v : k) {
      v = N01(rng);
      norm += v * v;
    }
    norm = std::sqrt(norm);
    for (auto& v : k) v /= norm;
    if (!inside(k)) continue;
    ++accepted;

    const double r = fn.rho(k);
    if (!(r > 0.0)) {
      rep.positive = false;
      fail("rho <= 0 at " + describe(k));
    }
    // Symmetry under every transposition.
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        auto p = k;
        std::swap(p[i], p[j]);
        const double e = std::abs(fn.rho(p) - r) / std::max(1.0, std::abs(r));
        rep.max_symmetry_error = std::max(rep.max_symmetry_error, e);
        if (e > 1e-12) {
          rep.symmetric = false;
          fail("asymmetric at " + describe(k));
        }
      }
    }
    for (double c : {0.5, 3.0}) {
      auto p = k;
      for (auto& v : p) v *= c;
      const double e = std::abs(fn.rho(p) - c * r) / std::max(1.0, std::abs(c * r));
      rep.max_homogeneity_error = std::max(rep.max_homogeneity_error, e);
      if (e > 1e-12) {
        rep.homogeneous = false;
        fail("not 1-homogeneous at " + describe(k));
      }
    }
    for (int i = 0; i < n; ++i) {
      auto p = k, m = k;
      p[i] += kGradStep;
      m[i] -= kGradStep;
      const double d = (fn.rho(p) - fn.rho(m)) / (2 * kGradStep);
      rep.min_gradient = std::min(rep.min_gradient, d);
      if (!(d > 0.0)) {
        rep.monotone = false;
        fail("d rho / d kappa_" + std::to_string(i) + " <= 0 at " + describe(k));
      }
    }
    // Fourth-order central differences for the Hessian.
    Eigen::MatrixXd Hs(n, n);
    const double h = kHessStep;
    auto at = [&](int i, double si, int j, double sj) {
      auto p = k;
      p[i] += si;
      p[j] += sj;
      return fn.rho(p);
    };
    for (int i = 0; i < n; ++i) {
      Hs(i, i) = (-at(i, 2 * h, i, 0) + 16 * at(i, h, i, 0) - 30 * r + 16 * at(i, -h, i, 0) - at(i, -2 * h, i, 0)) /
                 (12 * h * h);
      for (int j = i + 1; j < n; ++j) {
        const double v = (8 * (at(i, h, j, -2 * h) + at(i, 2 * h, j, -h) + at(i, -2 * h, j, h) + at(i, -h, j, 2 * h)) -
                          8 * (at(i, -h, j, -2 * h) + at(i, -2 * h, j, -h) + at(i, h, j, 2 * h) + at(i, 2 * h, j, h)) -
                          (at(i, 2 * h, j, -2 * h) + at(i, -2 * h, j, 2 * h) - at(i, 2 * h, j, 2 * h) -
                           at(i, -2 * h, j, -2 * h)) +
                          64 * (at(i, -h, j, -h) + at(i, h, j, h) - at(i, h, j, -h) - at(i, -h, j, h))) /
                         (144 * h * h);
        Hs(i, j) = Hs(j, i) = v;
      }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Hs, Eigen::EigenvaluesOnly);
    const double top = es.eigenvalues().maxCoeff();
    rep.max_hessian_eigenvalue = std::max(rep.max_hessian_eigenvalue, top);
    if (top > kHessTol) {
      rep.concave = false;
      std::ostringstream s;
      s << "Hessian eigenvalue " << top << " > 0 at " << describe(k);
      fail(s.str());
    }
  }
  rep.samples = accepted;
  if (accepted < samples) {
    rep.positive = false;
    fail("cone too thin: only " + std::to_string(accepted) + " samples found");
  }
  return rep;
}

ClassCReport class_c_audit(const SpeedFunction& speed, int n, int samples, std::uint64_t seed) {
  speed.validate(n);
  return class_c_audit(as_curvature_function(speed), n, samples, seed);
}

}  // namespace icf
