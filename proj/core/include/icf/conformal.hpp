#pragma once

#include "icf/radial_graph.hpp"

#include <Eigen/Core>

#include <array>
#include <cstdint>

namespace icf {

/// Vector field x -> v + M x + mu x + 2<b,x> x - |x|^2 b on R^3 with an
/// arbitrary linear part M. Conformal Killing fields are the case M skew; the
/// general form exists so that negative controls can break conformality.
struct QuadraticField {
  Eigen::Vector3d v = Eigen::Vector3d::Zero();
  Eigen::Matrix3d M = Eigen::Matrix3d::Zero();
  double mu = 0.0;
  Eigen::Vector3d b = Eigen::Vector3d::Zero();

  Eigen::Vector3d operator()(const Eigen::Vector3d& x) const;
  Eigen::Matrix3d jacobian(const Eigen::Vector3d& x) const;
  double divergence(const Eigen::Vector3d& x) const;
};

/// Conformal Killing field of Euclidean R^3:
///   V(x) = v + S x + mu x + 2<b,x> x - |x|^2 b,  S skew.
/// S is stored through its strictly-lower triangle (S10, S20, S21).
struct ConformalKillingField {
  Eigen::Vector3d v = Eigen::Vector3d::Zero();
  std::array<double, 3> S_lower{0.0, 0.0, 0.0};
  double mu = 0.0;
  Eigen::Vector3d b = Eigen::Vector3d::Zero();

  Eigen::Matrix3d S() const;
  QuadraticField field() const;
  /// Rotation generator about `axis` with angular speed |axis|.
  static ConformalKillingField rotation(const Eigen::Vector3d& axis);
  /// Parameter vector (v, S_lower, mu, b).
  Eigen::Matrix<double, 10, 1> parameters() const;
  static ConformalKillingField from_parameters(const Eigen::Matrix<double, 10, 1>& p);
  bool all_finite() const;
};

/// Ambient dimension n + 1 of the discretized setting.
inline constexpr int kAmbientDim = 3;

Eigen::Vector3d evaluate(const ConformalKillingField& V, const Eigen::Vector3d& x);
double divergence(const ConformalKillingField& V, const Eigen::Vector3d& x);
/// alpha_V = div V / (n + 1).
double conformal_factor(const ConformalKillingField& V, const Eigen::Vector3d& x);
double conformal_factor(const QuadraticField& V, const Eigen::Vector3d& x);
/// Operator norm of DV + DV^T - 2 alpha I.
double killing_residual(const QuadraticField& V, const Eigen::Vector3d& x);
double killing_residual(const ConformalKillingField& V, const Eigen::Vector3d& x);

struct FlowOptions {
  double tolerance = 1e-10;      // per-step absolute and relative error bound
  double blow_up_radius = 1e12;
  double min_step = 1e-14;       // relative to max(1, |t|)
};

/// Phi_t(x): solution at time t of x' = V(x), x(0) = x. Negative t flows backward.
/// Throws FlowBlowUp when |x| exceeds the blow-up radius or the step underflows.
Eigen::Vector3d flow_map(const QuadraticField& V, double t, const Eigen::Vector3d& x, const FlowOptions& opt = {});
Eigen::Vector3d flow_map(const ConformalKillingField& V, double t, const Eigen::Vector3d& x,
                         const FlowOptions& opt = {});

struct FlowWithJacobian {
  Eigen::Vector3d x;
  Eigen::Matrix3d jacobian;  // D Phi_t at the starting point
};

FlowWithJacobian flow_map_with_jacobian(const ConformalKillingField& V, double t, const Eigen::Vector3d& x,
                                        const FlowOptions& opt = {});

/// The radial graph of Phi_t(Sigma). Throws NotStarShaped if some ray from the
/// origin meets the mapped surface in more than one point (or none).
StarShapedHypersurface pushforward_surface(const ConformalKillingField& V, double t,
                                           const StarShapedHypersurface& surface, const FlowOptions& opt = {});

struct QuadraticCheck {
  bool passed = false;
  double third_difference = 0.0;   // largest third finite difference
  double second_difference = 0.0;  // largest deviation from the alpha identity
};

/// Probes random points: third differences of every component vanish and
/// D_i D_j V^k = delta_jk D_i alpha + delta_ik D_j alpha - delta_ij D_k alpha.
QuadraticCheck component_quadratic_check(const QuadraticField& V, std::uint64_t seed = 1, int probes = 8);

}  // namespace icf
