#include "icf/invariants.hpp"

#include "icf/errors.hpp"

#include <Eigen/LU>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace icf {

double unit_sphere_area(int n) {
  // |S^n| = 2 pi^{(n+1)/2} / Gamma((n+1)/2)
  return 2.0 * std::pow(std::numbers::pi, 0.5 * (n + 1)) / std::tgamma(0.5 * (n + 1));
}

double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  double c = 1.0;
  for (int i = 1; i <= k; ++i) c = c * (n - k + i) / i;
  return c;
}

std::vector<double> default_a_values(int n) { return {-1.0 / (2.0 * n), 0.0, 1.0}; }

std::array<double, 2> g_eigenvalues(const Eigen::Matrix2d& g, const Eigen::Matrix2d& E) {
  const Eigen::Matrix2d T = g.inverse() * E;
  const double tr = T.trace();
  const double split = std::sqrt(std::max(0.0, (T(0, 0) - T(1, 1)) * (T(0, 0) - T(1, 1)) + 4.0 * T(0, 1) * T(1, 0)));
  return {0.5 * (tr - split), 0.5 * (tr + split)};
}

Eigen::Matrix2d e_tensor_components(const Eigen::Matrix2d& g, const Eigen::Matrix2d& h, double a, int n) {
  const Eigen::Matrix2d g_inv = g.inverse();
  const double H = (g_inv * h).trace();
  const double A2 = (g_inv * h * g_inv * h).trace();
  return H * h + a * H * H * g - 0.5 * n * (h * g_inv * h) - 0.5 * (2.0 * a * n + 1.0) * A2 * g;
}

namespace {

ScalarField pointwise(const GridPtr& grid, std::size_t n, auto&& fn) {
  ScalarField out(grid);
  for (std::size_t k = 0; k < n; ++k) out[k] = fn(k);
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------

ETensor e_tensor(const GeometryBundle& geo, double a) {
  const int n = geo.n;
  const auto& gp = geo.grid;
  ETensor out;
  out.a = a;
  out.characterizes_umbilics = 2.0 * a * n + 1.0 >= 0.0;
  out.E = {ScalarField(gp), ScalarField(gp), ScalarField(gp)};
  out.norm = ScalarField(gp);
  out.eigenvalues.resize(geo.size());
  out.predicted.resize(geo.size());
  const double c = 0.5 * (2.0 * a * n + 1.0);
  for (std::size_t k = 0; k < geo.size(); ++k) {
    const Eigen::Matrix2d g = geo.g.at(k);
    const Eigen::Matrix2d h = geo.h.at(k);
    const double H = geo.H[k];
    const Eigen::Matrix2d hh = h * geo.g_inv.at(k) * h;
    const Eigen::Matrix2d E = H * h + a * H * H * g - 0.5 * n * hh - c * geo.A2[k] * g;
    out.E.tt[k] = E(0, 0);
    out.E.tp[k] = 0.5 * (E(0, 1) + E(1, 0));
    out.E.pp[k] = E(1, 1);
    const auto ev = g_eigenvalues(g, out.E.at(k));
    out.eigenvalues[k] = ev;
    out.norm[k] = std::max(std::abs(ev[0]), std::abs(ev[1]));
    out.sup = std::max(out.sup, out.norm[k]);
    std::array<double, 2> pred{};
    for (int i = 0; i < 2; ++i) {
      const double d = geo.kappa[k][i] - H / n;
      pred[i] = -0.5 * n * d * d - c * geo.A0_2[k];
    }
    if (pred[0] > pred[1]) std::swap(pred[0], pred[1]);
    out.predicted[k] = pred;
    out.eigen_mismatch = std::max({out.eigen_mismatch, std::abs(pred[0] - ev[0]), std::abs(pred[1] - ev[1])});
  }
  return out;
}

ETensor e_tensor(const StarShapedHypersurface& surface, double a) { return e_tensor(geometry(surface), a); }

double e_tensor_inversion_gap(const StarShapedHypersurface& surface, double a) {
  const auto e = e_tensor(surface, a);
  const auto ei = e_tensor(surface.invert(), a);
  double gap = 0.0;
  for (std::size_t k = 0; k < e.E.tt.size(); ++k) {
    gap = std::max({gap, std::abs(e.E.tt[k] - ei.E.tt[k]), std::abs(e.E.tp[k] - ei.E.tp[k]),
                    std::abs(e.E.pp[k] - ei.E.pp[k])});
  }
  return gap;
}

void require_mean_convex(const GeometryBundle& geo) {
  for (std::size_t k = 0; k < geo.size(); ++k) {
    if (!(geo.H[k] > 0.0)) {
      std::ostringstream msg;
      msg << "mean curvature " << geo.H[k] << " at node " << k << " is not positive";
      throw MeanConvexityError(msg.str());
    }
  }
}

double willmore(const GeometryBundle& geo) {
  require_mean_convex(geo);
  return geo.integrate(pointwise(geo.grid, geo.size(), [&](std::size_t k) { return std::pow(geo.H[k], geo.n); }));
}

double willmore(const StarShapedHypersurface& surface) { return willmore(geometry(surface)); }

double willmore_rate(const GeometryBundle& geo, const ScalarField& speed) {
  require_mean_convex(geo);
  geo.grid->require(speed);
  const int n = geo.n;
  const auto dH = geo.grid->gradient(geo.H);
  const auto dphi = geo.grid->gradient(speed);
  return geo.integrate(pointwise(geo.grid, geo.size(), [&](std::size_t k) {
    const Eigen::Vector2d a(dH.theta[k], dH.phi[k]), b(dphi.theta[k], dphi.phi[k]);
    const double inner = a.dot(geo.g_inv.at(k) * b);
    const double H = geo.H[k];
    return n * (n - 1) * std::pow(H, n - 2) * inner - n * speed[k] * std::pow(H, n - 1) * geo.A0_2[k];
  }));
}

double willmore_rate_imcf(const GeometryBundle& geo) {
  require_mean_convex(geo);
  const int n = geo.n;
  const auto dH = geo.grid->gradient(geo.H);
  return geo.integrate(pointwise(geo.grid, geo.size(), [&](std::size_t k) {
    const Eigen::Vector2d a(dH.theta[k], dH.phi[k]);
    const double grad2 = a.dot(geo.g_inv.at(k) * a);
    const double H = geo.H[k];
    return -n * (n - 1) * std::pow(H, n - 4) * grad2 - n * std::pow(H, n - 2) * geo.A0_2[k];
  }));
}

double guan_li_Q(const GeometryBundle& geo, int k) {
  const int n = geo.n;
  if (k < 1 || k >= n) throw InvalidArgument("guan_li_Q: k must satisfy 1 <= k < n");
  const double top = geo.sigma_integral(k);
  const double bottom = geo.sigma_integral(k - 1);
  if (!(top > 0.0) || !(bottom > 0.0)) {
    std::ostringstream msg;
    msg << "integrals of sigma_" << k << " (" << top << ") and sigma_" << k - 1 << " (" << bottom
        << ") must be positive";
    throw ConvexityClassError(msg.str());
  }
  return std::pow(top, 1.0 / (n - k)) / std::pow(bottom, 1.0 / (n - k + 1));
}

double guan_li_Q(const StarShapedHypersurface& surface, int k) { return guan_li_Q(geometry(surface), k); }

MinkowskiResidual hsiung_minkowski_residual(const GeometryBundle& geo, const QuadraticField& V, int k) {
  const int n = geo.n;
  if (k < 0 || k > n - 1) throw InvalidArgument("hsiung_minkowski_residual: k must lie in [0, n-1]");
  const double ck = binomial(n, k), ck1 = binomial(n, k + 1);
  ScalarField left(geo.grid), right(geo.grid), left_abs(geo.grid), right_abs(geo.grid);
  for (std::size_t i = 0; i < geo.size(); ++i) {
    const Eigen::Vector3d& x = geo.position[i];
    left[i] = conformal_factor(V, x) * geo.sigma[k][i] / ck;
    right[i] = V(x).dot(geo.normal[i]) * geo.sigma[k + 1][i] / ck1;
    left_abs[i] = std::abs(left[i]);
    right_abs[i] = std::abs(right[i]);
  }
  MinkowskiResidual out;
  out.lhs = geo.integrate(left);
  out.rhs = geo.integrate(right);
  out.residual = out.lhs - out.rhs;
  out.scale = geo.integrate(left_abs) + geo.integrate(right_abs);
  return out;
}

MinkowskiResidual hsiung_minkowski_residual(const GeometryBundle& geo, const ConformalKillingField& V, int k) {
  return hsiung_minkowski_residual(geo, V.field(), k);
}

double weighted_divergence(const GeometryBundle& geo, const ConformalKillingField& V, int j) {
  const double weight = geo.sigma_integral(j);
  if (!(weight > 0.0)) throw ConvexityClassError("sigma_" + std::to_string(j) + " integral must be positive");
  const auto div = pointwise(geo.grid, geo.size(),
                             [&](std::size_t i) { return divergence(V, geo.position[i]) * geo.sigma[j][i]; });
  return geo.integrate(div) / weight;
}

double condition_V(const GeometryBundle& geo, const ConformalKillingField& V, int k) {
  if (k < 1 || k > geo.n) throw InvalidArgument("condition_V: k must lie in [1, n]");
  return weighted_divergence(geo, V, k - 1) - weighted_divergence(geo, V, k);
}

double qk_rate(const GeometryBundle& geo, const ConformalKillingField& V, int k) {
  const double Q = guan_li_Q(geo, k);
  return -Q / (geo.n + 1) * condition_V(geo, V, k);
}

Eigen::Vector3d center_of_mass(const GeometryBundle& geo, int k) {
  const double weight = geo.sigma_integral(k);
  if (!(weight > 0.0)) throw ConvexityClassError("sigma_" + std::to_string(k) + " integral must be positive");
  Eigen::Vector3d c;
  for (int d = 0; d < 3; ++d) {
    c[d] = geo.integrate(pointwise(geo.grid, geo.size(),
                                   [&](std::size_t i) { return geo.sigma[k][i] * geo.position[i][d]; })) /
           weight;
  }
  return c;
}

namespace {

double appendix_q1(const GeometryBundle& geo) {
  const int n = geo.n;
  return std::pow(geo.area(), -(n - 1.0) / n) * geo.sigma_integral(1);
}

}  // namespace

QbarReport qbar(const StarShapedHypersurface& surface) {
  const auto geo = geometry(surface);
  const auto inv = geometry(surface.invert());
  const int n = geo.n;
  QbarReport out;
  out.q1 = appendix_q1(geo);
  out.q1_inverted = appendix_q1(inv);
  out.qbar = out.q1 + out.q1_inverted;
  out.R = surface.f().max();
  out.r = surface.f().min();
  const double base = 2.0 * n * unit_sphere_area(n) / std::pow(geo.area() * inv.area(), (n - 1.0) / (2.0 * n));
  const double ratio = std::pow(out.r / out.R, 1.5 * (n - 1));
  out.lower = ratio * base;
  out.upper = base / ratio;
  out.holds = out.lower * (1.0 - kQbarSlack) <= out.qbar && out.qbar <= out.upper * (1.0 + kQbarSlack);
  return out;
}

EnergyReport energy_report(const StarShapedHypersurface& surface, const std::vector<double>& a_values) {
  const auto geo = geometry(surface);
  EnergyReport out;
  out.W = willmore(geo);
  for (int k = 1; k < geo.n; ++k) out.Q[k] = guan_li_Q(geo, k);
  out.qbar = qbar(surface);
  for (double a : a_values) out.E_sup[a] = e_tensor(geo, a).sup;
  out.area = geo.area();
  for (int k = 0; k <= geo.n; ++k) out.sigma_integrals.push_back(geo.sigma_integral(k));
  return out;
}

}  // namespace icf
