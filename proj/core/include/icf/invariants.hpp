#pragma once

#include "icf/conformal.hpp"
#include "icf/radial_graph.hpp"

#include <Eigen/Core>

#include <array>
#include <map>
#include <vector>

namespace icf {

struct ETensor {
  double a = 0.0;
  CovariantTensor2 E;
  ScalarField norm;  // operator norm of E with respect to g, per node
  double sup = 0.0;
  /// False when 2an + 1 < 0: E still transforms covariantly but its vanishing
  /// no longer characterizes umbilic points.
  bool characterizes_umbilics = true;
  /// g-eigenvalues of E (ascending) and the closed-form prediction
  /// -(n/2)(kappa_i - H/n)^2 - ((2an+1)/2)|A°|^2.
  std::vector<std::array<double, 2>> eigenvalues;
  std::vector<std::array<double, 2>> predicted;
  double eigen_mismatch = 0.0;
};

/// E_ij(a) = H h_ij + a H^2 g_ij - (n/2) h_ik g^kl h_lj - ((2an+1)/2) |A|^2 g_ij
/// at a single point.
Eigen::Matrix2d e_tensor_components(const Eigen::Matrix2d& g, const Eigen::Matrix2d& h, double a, int n = 2);
/// Eigenvalues (ascending) of the g-self-adjoint endomorphism g^{-1} T.
std::array<double, 2> g_eigenvalues(const Eigen::Matrix2d& g, const Eigen::Matrix2d& T);

ETensor e_tensor(const GeometryBundle& geo, double a);
ETensor e_tensor(const StarShapedHypersurface& surface, double a);

/// sup over nodes and chart components of |E(a) on invert(surface) - E(a) on surface|.
double e_tensor_inversion_gap(const StarShapedHypersurface& surface, double a);

/// Default sweep {-1/(2n), 0, 1}.
std::vector<double> default_a_values(int n = 2);

/// Throws MeanConvexityError unless H > 0 at every node.
void require_mean_convex(const GeometryBundle& geo);

/// W = int H^n dmu.
double willmore(const GeometryBundle& geo);
double willmore(const StarShapedHypersurface& surface);

/// dW/dt for the normal variation X_t = speed * nu (outward):
///   int n(n-1) H^{n-2} <grad H, grad speed> - n speed H^{n-1} |A°|^2 dmu.
double willmore_rate(const GeometryBundle& geo, const ScalarField& speed);
/// The same rate for speed 1/H written as
///   int -n(n-1) H^{n-4} |grad H|^2 - n H^{n-2} |A°|^2 dmu.
double willmore_rate_imcf(const GeometryBundle& geo);

/// Q_k = (int sigma_k)^{1/(n-k)} / (int sigma_{k-1})^{1/(n-k+1)}, 1 <= k < n.
double guan_li_Q(const GeometryBundle& geo, int k);
double guan_li_Q(const StarShapedHypersurface& surface, int k);

struct MinkowskiResidual {
  double lhs = 0.0;  // int alpha sigma_k / C(n,k)
  double rhs = 0.0;  // int <V,nu> sigma_{k+1} / C(n,k+1)
  double residual = 0.0;
  double scale = 0.0;  // sum of the integrals of the absolute integrands
  double relative() const { return scale > 0.0 ? std::abs(residual) / scale : std::abs(residual); }
};

MinkowskiResidual hsiung_minkowski_residual(const GeometryBundle& geo, const QuadraticField& V, int k);
MinkowskiResidual hsiung_minkowski_residual(const GeometryBundle& geo, const ConformalKillingField& V, int k);

/// sigma_j-weighted average of div V over the surface.
double weighted_divergence(const GeometryBundle& geo, const ConformalKillingField& V, int j);

/// avg_{k-1}(div V) - avg_k(div V); zero exactly when the sigma_k and
/// sigma_{k-1} weighted averages of div V agree.
double condition_V(const GeometryBundle& geo, const ConformalKillingField& V, int k);

/// d/dt Q_k(Phi_t(Sigma)) at t = 0, equal to -Q_k/(n+1) * condition_V.
double qk_rate(const GeometryBundle& geo, const ConformalKillingField& V, int k);

Eigen::Vector3d center_of_mass(const GeometryBundle& geo, int k);

/// Relative slack in QbarReport::holds; spheres attain both bounds.
inline constexpr double kQbarSlack = 1e-9;

struct QbarReport {
  double q1 = 0.0;           // |Sigma|^{-(n-1)/n} int H dmu
  double q1_inverted = 0.0;  // the same for the inverted surface
  double qbar = 0.0;
  double lower = 0.0;
  double upper = 0.0;
  double R = 0.0;  // max f
  double r = 0.0;  // min f
  bool holds = false;  // lower <= qbar <= upper up to kQbarSlack relative
  double margin() const { return std::min(qbar - lower, upper - qbar); }
};

QbarReport qbar(const StarShapedHypersurface& surface);

struct EnergyReport {
  double W = 0.0;
  std::map<int, double> Q;
  QbarReport qbar;
  std::map<double, double> E_sup;
  double area = 0.0;
  std::vector<double> sigma_integrals;
};

EnergyReport energy_report(const StarShapedHypersurface& surface, const std::vector<double>& a_values);

/// Area of the unit n-sphere.
double unit_sphere_area(int n);
double binomial(int n, int k);

}  // namespace icf
