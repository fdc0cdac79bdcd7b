#include "icf/soliton.hpp"

#include "icf/errors.hpp"
#include "icf/flow.hpp"

#include <Eigen/SVD>

#include <cmath>
#include <cstdio>
#include <limits>

namespace icf {

namespace {

using Vec10 = Eigen::Matrix<double, 10, 1>;

// Singular values below this fraction of the largest (Gram condition 1e10)
// are unobservable at grid resolution and treated as null directions.
constexpr double kRankThreshold = 1e-5;
constexpr double kConditionWarning = 1e10;

/// <V_p(x), nu> for each unit parameter vector e_p.
Eigen::Matrix<double, 1, 10> basis_row(const Eigen::Vector3d& x, const Eigen::Vector3d& nu) {
  Eigen::Matrix<double, 1, 10> row;
  for (int p = 0; p < 10; ++p) {
    Vec10 e = Vec10::Zero();
    e[p] = 1.0;
    row[p] = evaluate(ConformalKillingField::from_parameters(e), x).dot(nu);
  }
  return row;
}

struct Design {
  Eigen::MatrixXd A;  // sqrt(weight) * <V_p, nu>
  Eigen::VectorXd y;  // sqrt(weight) / rho
};

Design design(const GeometryBundle& geo, const SpeedFunction& speed) {
  const auto target = normal_speed(geo, speed);
  const auto& grid = *geo.grid;
  Design d{Eigen::MatrixXd(geo.size(), 10), Eigen::VectorXd(geo.size())};
  for (int i = 0; i < grid.n_theta(); ++i) {
    for (int j = 0; j < grid.n_phi(); ++j) {
      const std::size_t k = grid.index(i, j);
      const double s = std::sqrt(grid.weight(i, j) * geo.area_density[k]);
      d.A.row(k) = s * basis_row(geo.position[k], geo.normal[k]);
      d.y[k] = s * target[k];
    }
  }
  return d;
}

/// Minimum-norm solution of B z = r in the least-squares sense together with
/// a basis of the null space of B.
std::pair<Eigen::VectorXd, Eigen::MatrixXd> min_norm(const Eigen::MatrixXd& B, const Eigen::VectorXd& r, double tol) {
  if (B.cols() == 0) return {Eigen::VectorXd(0), Eigen::MatrixXd(0, 0)};
  Eigen::BDCSVD<Eigen::MatrixXd> svd(B, Eigen::ComputeThinU | Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  const double cut = s.size() > 0 ? tol * std::max(s[0], 1.0) : 0.0;
  int rank = 0;
  while (rank < s.size() && s[rank] > cut) ++rank;
  Eigen::VectorXd z = Eigen::VectorXd::Zero(B.cols());
  for (int i = 0; i < rank; ++i) z += svd.matrixV().col(i) * (svd.matrixU().col(i).dot(r) / s[i]);
  return {z, svd.matrixV().rightCols(B.cols() - rank)};
}

Eigen::MatrixXd rows(const Eigen::MatrixXd& M, std::initializer_list<int> idx) {
  Eigen::MatrixXd out(idx.size(), M.cols());
  int r = 0;
  for (int i : idx) out.row(r++) = M.row(i);
  return out;
}

}  // namespace

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::soliton: return "soliton";
    case Verdict::not_soliton: return "not_soliton";
    case Verdict::inconclusive: return "inconclusive";
  }
  return "?";
}

ScalarField soliton_residual(const GeometryBundle& geo, const ConformalKillingField& V, const SpeedFunction& speed) {
  ScalarField r = normal_speed(geo, speed);
  for (std::size_t k = 0; k < geo.size(); ++k) r[k] = evaluate(V, geo.position[k]).dot(geo.normal[k]) - r[k];
  return r;
}

ScalarField soliton_residual(const StarShapedHypersurface& surface, const ConformalKillingField& V,
                             const SpeedFunction& speed) {
  return soliton_residual(geometry(surface), V, speed);
}

SolitonObjective soliton_objective(const GeometryBundle& geo, const SpeedFunction& speed) {
  const auto d = design(geo, speed);
  SolitonObjective J;
  J.gram = d.A.transpose() * d.A;
  J.linear = d.A.transpose() * d.y;
  J.constant = d.y.squaredNorm();
  return J;
}

double soliton_misfit(const GeometryBundle& geo, const ConformalKillingField& V, const SpeedFunction& speed) {
  ScalarField r = soliton_residual(geo, V, speed);
  for (std::size_t k = 0; k < r.size(); ++k) r[k] *= r[k];
  return geo.integrate(r);
}

SolitonReport best_fit_ckf(const StarShapedHypersurface& surface, const SpeedFunction& speed) {
  const auto geo = geometry(surface);
  const auto d = design(geo, speed);

  Eigen::BDCSVD<Eigen::MatrixXd> svd(d.A, Eigen::ComputeThinU | Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  SolitonReport rep;
  const double cut = kRankThreshold * s[0];
  while (rep.rank < s.size() && s[rep.rank] > cut) ++rep.rank;
  rep.gram_condition = s[s.size() - 1] > 0.0 ? std::pow(s[0] / s[s.size() - 1], 2)
                                             : std::numeric_limits<double>::infinity();
  rep.ill_conditioned = rep.gram_condition > kConditionWarning;
  if (rep.ill_conditioned) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3e", rep.gram_condition);
    rep.warnings.push_back(std::string("Gram matrix condition number ") + buf +
                           " exceeds 1e10; unobservable directions resolved by minimum norm");
  }

  Vec10 x = Vec10::Zero();
  for (int i = 0; i < rep.rank; ++i) x += svd.matrixV().col(i) * (svd.matrixU().col(i).dot(d.y) / s[i]);
  const Eigen::MatrixXd N = svd.matrixV().rightCols(10 - rep.rank);
  if (N.cols() > 0) {
    // Prefer no rotation / special-conformal part, then the smallest (v, mu).
    const Eigen::MatrixXd B = rows(N, {3, 4, 5, 7, 8, 9});
    const Eigen::VectorXd xb = rows(x, {3, 4, 5, 7, 8, 9});
    const auto [z1, Z2] = min_norm(B, -xb, 1e-12);
    x += N * z1;
    if (Z2.cols() > 0) {
      const Eigen::MatrixXd NZ = N * Z2;
      const auto [y2, unused] = min_norm(rows(NZ, {0, 1, 2, 6}), -rows(x, {0, 1, 2, 6}), 1e-12);
      x += NZ * y2;
    }
  }
  const auto V = ConformalKillingField::from_parameters(x);
  rep.fitted = V;

  const auto r = soliton_residual(geo, V, speed);
  ScalarField r2(geo.grid);
  for (std::size_t k = 0; k < r.size(); ++k) {
    r2[k] = r[k] * r[k];
    rep.residual_sup = std::max(rep.residual_sup, std::abs(r[k]));
  }
  const double area = geo.area();
  rep.residual_l2 = std::sqrt(geo.integrate(r2) / area);
  rep.mean_speed = geo.integrate(normal_speed(geo, speed)) / area;
  rep.relative_residual = rep.residual_l2 / rep.mean_speed;
  return rep;
}

SolitonReport classify(const StarShapedHypersurface& surface, const SpeedFunction& speed, double tol) {
  if (!(tol > 0.0) || !std::isfinite(tol)) throw InvalidArgument("classify: tol must be positive");
  auto rep = best_fit_ckf(surface, speed);
  rep.tolerance = tol;
  if (rep.relative_residual < tol) {
    rep.verdict = Verdict::soliton;
  } else if (rep.relative_residual > 100.0 * tol) {
    rep.verdict = Verdict::not_soliton;
  } else {
    rep.verdict = Verdict::inconclusive;
    rep.suggestion = "residual within two decades of the tolerance; rerun on a finer grid";
  }
  return rep;
}

}  // namespace icf
