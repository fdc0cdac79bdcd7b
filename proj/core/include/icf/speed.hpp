#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace icf {

/// Curvature function rho(kappa) defining the normal speed 1/rho.
class SpeedFunction {
 public:
  enum class Kind { mean_curvature, quotient, power, ratio };

  static SpeedFunction mean_curvature();
  /// sigma_k / sigma_{k-1}
  static SpeedFunction quotient(int k);
  /// sigma_k^{1/k}
  static SpeedFunction power(int k);
  /// (sigma_i / sigma_j)^{1/(i-j)}, i > j >= 0
  static SpeedFunction ratio(int i, int j);
  /// "H", "quotient:k", "power:k" or "ratio:i,j". Throws InputError.
  static SpeedFunction parse(const std::string& text);

  Kind kind() const { return kind_; }
  std::string name() const;
  /// Largest sigma index involved; must not exceed n.
  int order() const;
  /// Throws InvalidArgument if the speed needs sigma_k with k > n.
  void validate(int n) const;

  double operator()(std::span<const double> kappa) const;
  /// d rho / d kappa_i.
  std::vector<double> gradient(std::span<const double> kappa) const;
  /// Open cone on which the speed is defined: sigma_l > 0 for 1 <= l <= order().
  bool in_cone(std::span<const double> kappa) const;
  /// mu = rho(1, ..., 1).
  double mu(int n) const;

 private:
  SpeedFunction(Kind kind, int i, int j) : kind_(kind), i_(i), j_(j) {}
  Kind kind_;
  int i_;
  int j_;
};

/// A symmetric curvature function together with its admissible cone, the
/// input of the class-C audit.
struct CurvatureFunction {
  std::string name;
  std::function<double(std::span<const double>)> rho;
  std::function<bool(std::span<const double>)> cone;
};

CurvatureFunction as_curvature_function(const SpeedFunction& speed);
/// rho = |A| = (sum kappa_i^2)^{1/2} on the positive cone: convex, not concave.
CurvatureFunction norm_of_second_fundamental_form();

struct ClassCReport {
  std::string name;
  int samples = 0;
  bool positive = true;
  bool symmetric = true;
  bool homogeneous = true;
  bool monotone = true;
  bool concave = true;
  double max_homogeneity_error = 0.0;
  double max_symmetry_error = 0.0;
  double min_gradient = 0.0;
  double max_hessian_eigenvalue = 0.0;
  std::vector<std::string> failures;  // first few failing samples, human readable
  bool passed() const { return positive && symmetric && homogeneous && monotone && concave; }
};

/// Samples unit-norm kappa in the cone (kept a fixed distance inside it) and
/// checks positivity, symmetry, degree-1 homogeneity, monotonicity and
/// concavity (Hessian eigenvalues <= 1e-8 by finite differences).
ClassCReport class_c_audit(const CurvatureFunction& fn, int n, int samples = 10000, std::uint64_t seed = 1);
ClassCReport class_c_audit(const SpeedFunction& speed, int n, int samples = 10000, std::uint64_t seed = 1);

}  // namespace icf
