#pragma once

#include "icf/conformal.hpp"
#include "icf/radial_graph.hpp"
#include "icf/speed.hpp"

#include <Eigen/Core>

#include <optional>
#include <string>
#include <vector>

namespace icf {

enum class Verdict { soliton, not_soliton, inconclusive };
std::string to_string(Verdict v);

struct SolitonReport {
  double residual_sup = 0.0;
  double residual_l2 = 0.0;  // area-weighted RMS of the residual
  double mean_speed = 0.0;   // area-weighted mean of 1/rho
  double relative_residual = 0.0;  // residual_l2 / mean_speed
  std::optional<ConformalKillingField> fitted;
  Verdict verdict = Verdict::inconclusive;
  double tolerance = 1e-6;
  int rank = 0;                   // numerical rank of the design
  double gram_condition = 0.0;    // (s_max / s_min)^2, infinite if singular
  bool ill_conditioned = false;   // gram_condition > 1e10
  std::vector<std::string> warnings;
  std::string suggestion;
};

/// <V, nu> - 1/rho(kappa) per node.
ScalarField soliton_residual(const GeometryBundle& geo, const ConformalKillingField& V, const SpeedFunction& speed);
ScalarField soliton_residual(const StarShapedHypersurface& surface, const ConformalKillingField& V,
                             const SpeedFunction& speed);

/// J(p) = int (<V_p, nu> - 1/rho)^2 dmu = p^T G p - 2 c^T p + e over the
/// parameter vector (v, S_lower, mu, b).
struct SolitonObjective {
  Eigen::Matrix<double, 10, 10> gram;
  Eigen::Matrix<double, 10, 1> linear;
  double constant = 0.0;
  double evaluate(const Eigen::Matrix<double, 10, 1>& p) const { return p.dot(gram * p) - 2.0 * linear.dot(p) + constant; }
};

SolitonObjective soliton_objective(const GeometryBundle& geo, const SpeedFunction& speed);
/// int residual^2 dmu, integrated directly.
double soliton_misfit(const GeometryBundle& geo, const ConformalKillingField& V, const SpeedFunction& speed);

/// Least-squares conformal Killing field. Among minimizers, the solution of
/// least |(S, b)| is chosen, then the one of least |(v, mu)|.
SolitonReport best_fit_ckf(const StarShapedHypersurface& surface, const SpeedFunction& speed);

/// best_fit_ckf plus the verdict: soliton if relative_residual < tol,
/// not_soliton if above 100 tol, inconclusive otherwise.
SolitonReport classify(const StarShapedHypersurface& surface, const SpeedFunction& speed, double tol = 1e-6);

}  // namespace icf
