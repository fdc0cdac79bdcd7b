#include "icf/conformal.hpp"

#include "icf/errors.hpp"

#include <Eigen/Eigenvalues>
#include <boost/math/tools/toms748_solve.hpp>
#include <boost/numeric/odeint.hpp>

#include <cmath>
#include <random>
#include <sstream>

namespace icf {

namespace odeint = boost::numeric::odeint;

// ---------------------------------------------------------------------------
// Fields

Eigen::Vector3d QuadraticField::operator()(const Eigen::Vector3d& x) const {
  return v + M * x + mu * x + 2.0 * b.dot(x) * x - x.squaredNorm() * b;
}

Eigen::Matrix3d QuadraticField::jacobian(const Eigen::Vector3d& x) const {
  return M + (mu + 2.0 * b.dot(x)) * Eigen::Matrix3d::Identity() + 2.0 * x * b.transpose() -
         2.0 * b * x.transpose();
}

double QuadraticField::divergence(const Eigen::Vector3d& x) const {
  return M.trace() + kAmbientDim * (mu + 2.0 * b.dot(x));
}

Eigen::Matrix3d ConformalKillingField::S() const {
  Eigen::Matrix3d s = Eigen::Matrix3d::Zero();
  s(1, 0) = S_lower[0];
  s(2, 0) = S_lower[1];
  s(2, 1) = S_lower[2];
  s(0, 1) = -S_lower[0];
  s(0, 2) = -S_lower[1];
  s(1, 2) = -S_lower[2];
  return s;
}

QuadraticField ConformalKillingField::field() const { return {v, S(), mu, b}; }

ConformalKillingField ConformalKillingField::rotation(const Eigen::Vector3d& axis) {
  // S x = axis x x.
  ConformalKillingField V;
  V.S_lower = {axis.z(), -axis.y(), axis.x()};
  return V;
}

Eigen::Matrix<double, 10, 1> ConformalKillingField::parameters() const {
  Eigen::Matrix<double, 10, 1> p;
  p << v, S_lower[0], S_lower[1], S_lower[2], mu, b;
  return p;
}

ConformalKillingField ConformalKillingField::from_parameters(const Eigen::Matrix<double, 10, 1>& p) {
  ConformalKillingField V;
  V.v = p.segment<3>(0);
  V.S_lower = {p(3), p(4), p(5)};
  V.mu = p(6);
  V.b = p.segment<3>(7);
  return V;
}

bool ConformalKillingField::all_finite() const { return parameters().allFinite(); }

Eigen::Vector3d evaluate(const ConformalKillingField& V, const Eigen::Vector3d& x) { return V.field()(x); }

double divergence(const ConformalKillingField& V, const Eigen::Vector3d& x) {
  return kAmbientDim * (V.mu + 2.0 * V.b.dot(x));
}

double conformal_factor(const ConformalKillingField& V, const Eigen::Vector3d& x) {
  return divergence(V, x) / kAmbientDim;
}

double conformal_factor(const QuadraticField& V, const Eigen::Vector3d& x) {
  return V.divergence(x) / kAmbientDim;
}

double killing_residual(const QuadraticField& V, const Eigen::Vector3d& x) {
  const Eigen::Matrix3d J = V.jacobian(x);
  const Eigen::Matrix3d R = J + J.transpose() - 2.0 * conformal_factor(V, x) * Eigen::Matrix3d::Identity();
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(R, Eigen::EigenvaluesOnly);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

double killing_residual(const ConformalKillingField& V, const Eigen::Vector3d& x) {
  return killing_residual(V.field(), x);
}

// ---------------------------------------------------------------------------
// Flow maps

namespace {

using State3 = std::array<double, 3>;
using State12 = std::array<double, 12>;

struct FieldRhs {
  const QuadraticField* V;
  void operator()(const State3& x, State3& dx, double) const {
    const auto& M = V->M;
    const auto& b = V->b;
    const double bx = b[0] * x[0] + b[1] * x[1] + b[2] * x[2];
    const double xx = x[0] * x[0] + x[1] * x[1] + x[2] * x[2];
    for (int r = 0; r < 3; ++r) {
      dx[r] = V->v[r] + M(r, 0) * x[0] + M(r, 1) * x[1] + M(r, 2) * x[2] + V->mu * x[r] + 2.0 * bx * x[r] -
              xx * b[r];
    }
  }
};

// Position followed by the 3x3 variational matrix (column-major).
struct VariationalRhs {
  const QuadraticField* V;
  void operator()(const State12& s, State12& ds, double) const {
    const Eigen::Vector3d x(s[0], s[1], s[2]);
    const Eigen::Vector3d dx = (*V)(x);
    const Eigen::Matrix3d J = V->jacobian(x);
    const Eigen::Map<const Eigen::Matrix3d> P(s.data() + 3);
    const Eigen::Matrix3d dP = J * P;
    for (int r = 0; r < 3; ++r) ds[r] = dx[r];
    for (int k = 0; k < 9; ++k) ds[3 + k] = dP.data()[k];
  }
};

template <class State, class Rhs>
void integrate_to(Rhs rhs, State& x, double t_end, const FlowOptions& opt) {
  if (t_end == 0.0) return;
  auto stepper = odeint::make_controlled(opt.tolerance, opt.tolerance, odeint::runge_kutta_fehlberg78<State>());
  const double direction = t_end > 0 ? 1.0 : -1.0;
  const double span = std::abs(t_end);
  const double min_step = opt.min_step * std::max(1.0, span);
  double t = 0.0;
  double dt = direction * std::min(span, 0.05);
  while (direction * (t_end - t) > 0.0) {
    if (direction * (t + dt - t_end) > 0.0) dt = t_end - t;
    const auto result = stepper.try_step(rhs, x, t, dt);
    if (result == odeint::fail && std::abs(dt) < min_step) {
      throw FlowBlowUp("flow step size underflow at t = " + std::to_string(t));
    }
    const double r2 = x[0] * x[0] + x[1] * x[1] + x[2] * x[2];
    if (!std::isfinite(r2) || r2 > opt.blow_up_radius * opt.blow_up_radius) {
      throw FlowBlowUp("flow left the ball of radius " + std::to_string(opt.blow_up_radius) + " at t = " +
                       std::to_string(t));
    }
    if (result == odeint::success && direction * (t_end - t) < 1e-15 * std::max(1.0, span)) break;
  }
}

}  // namespace

Eigen::Vector3d flow_map(const QuadraticField& V, double t, const Eigen::Vector3d& x, const FlowOptions& opt) {
  State3 s{x[0], x[1], x[2]};
  integrate_to(FieldRhs{&V}, s, t, opt);
  return {s[0], s[1], s[2]};
}

Eigen::Vector3d flow_map(const ConformalKillingField& V, double t, const Eigen::Vector3d& x,
                         const FlowOptions& opt) {
  return flow_map(V.field(), t, x, opt);
}

FlowWithJacobian flow_map_with_jacobian(const ConformalKillingField& V, double t, const Eigen::Vector3d& x,
                                        const FlowOptions& opt) {
  const QuadraticField q = V.field();
  State12 s{};
  s[0] = x[0];
  s[1] = x[1];
  s[2] = x[2];
  s[3] = s[7] = s[11] = 1.0;
  integrate_to(VariationalRhs{&q}, s, t, opt);
  FlowWithJacobian out;
  out.x = {s[0], s[1], s[2]};
  out.jacobian = Eigen::Map<const Eigen::Matrix3d>(s.data() + 3);
  return out;
}

// ---------------------------------------------------------------------------
// Pushforward of a radial graph

StarShapedHypersurface pushforward_surface(const ConformalKillingField& V, double t,
                                           const StarShapedHypersurface& surface, const FlowOptions& opt) {
  if (t == 0.0) return surface;
  const auto& grid = *surface.grid();
  const QuadraticField q = V.field();
  const auto& f = surface.f();

  double r_min = std::numeric_limits<double>::infinity();
  double r_max = 0.0;
  double r_mean = 0.0;
  for (int i = 0; i < grid.n_theta(); ++i) {
    for (int j = 0; j < grid.n_phi(); ++j) {
      const double r = flow_map(q, t, f(i, j) * grid.point(i, j), opt).norm();
      r_min = std::min(r_min, r);
      r_max = std::max(r_max, r);
      r_mean += r;
    }
  }
  r_mean /= static_cast<double>(grid.size());

  const auto shape = grid.interpolant(f);
  ScalarField out(surface.grid());
  constexpr int kScan = 12;
  for (int i = 0; i < grid.n_theta(); ++i) {
    for (int j = 0; j < grid.n_phi(); ++j) {
      const Eigen::Vector3d dir = grid.point(i, j);
      // Signed distance of the pulled-back ray point from Sigma, negative inside.
      auto G = [&](double r) {
        const Eigen::Vector3d y = flow_map(q, -t, r * dir, opt);
        return y.norm() - shape.at(y);
      };
      double lo = 0.95 * r_min, hi = 1.05 * r_max;
      double g_lo = G(lo), g_hi = G(hi);
      for (int k = 0; k < 8 && g_lo >= 0.0; ++k) g_lo = G(lo *= 0.5);
      for (int k = 0; k < 8 && g_hi <= 0.0; ++k) g_hi = G(hi *= 2.0);
      if (g_lo >= 0.0 || g_hi <= 0.0) {
        std::ostringstream msg;
        msg << "ray through node (" << i << ", " << j << ") does not cross the mapped surface";
        throw NotStarShaped(msg.str());
      }
      double roots[kScan];
      int n_roots = 0;
      double a = lo, ga = g_lo;
      for (int s = 1; s <= kScan; ++s) {
        const double bnd = lo + (hi - lo) * s / kScan;
        const double gb = s == kScan ? g_hi : G(bnd);
        if ((ga < 0.0) != (gb < 0.0) || gb == 0.0) {
          std::uintmax_t iters = 100;
          const auto br = boost::math::tools::toms748_solve(
              G, a, bnd, ga, gb,
              [](double x, double y) { return std::abs(x - y) <= 1e-15 * std::max(std::abs(x), 1.0); }, iters);
          roots[n_roots++] = 0.5 * (br.first + br.second);
        }
        a = bnd;
        ga = gb;
      }
      for (int s = 1; s < n_roots; ++s) {
        if (std::abs(roots[s] - roots[0]) > 1e-6 * r_mean) {
          std::ostringstream msg;
          msg << "ray through node (" << i << ", " << j << ") meets the mapped surface at radii " << roots[0]
              << " and " << roots[s];
          throw NotStarShaped(msg.str());
        }
      }
      out(i, j) = roots[0];
    }
  }
  return StarShapedHypersurface(std::move(out));
}

// ---------------------------------------------------------------------------

QuadraticCheck component_quadratic_check(const QuadraticField& V, std::uint64_t seed, int probes) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  const double h = 0.05;
  QuadraticCheck out;
  const Eigen::Matrix3d I = Eigen::Matrix3d::Identity();
  for (int p = 0; p < probes; ++p) {
    const Eigen::Vector3d x(U(rng), U(rng), U(rng));
    // Gradient of alpha by central differences.
    Eigen::Vector3d Dalpha;
    for (int i = 0; i < 3; ++i) {
      Dalpha[i] = (conformal_factor(V, x + h * I.col(i)) - conformal_factor(V, x - h * I.col(i))) / (2 * h);
    }
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) {
        const Eigen::Vector3d ei = h * I.col(i), ej = h * I.col(j);
        const Eigen::Vector3d d2 = (V(x + ei + ej) - V(x + ei - ej) - V(x - ei + ej) + V(x - ei - ej)) / (4 * h * h);
        for (int k = 0; k < 3; ++k) {
          const double expected = I(j, k) * Dalpha[i] + I(i, k) * Dalpha[j] - I(i, j) * Dalpha[k];
          out.second_difference = std::max(out.second_difference, std::abs(d2[k] - expected));
        }
        // Third difference along direction i after a mixed step in j.
        const Eigen::Vector3d d3 = (V(x + 2 * ei + ej) - 3 * V(x + ei + ej) + 3 * V(x + ej) - V(x - ei + ej)) /
                                   (h * h * h);
        out.third_difference = std::max(out.third_difference, d3.cwiseAbs().maxCoeff());
      }
    }
  }
  out.passed = out.third_difference < 1e-6 && out.second_difference < 1e-6;
  return out;
}

}  // namespace icf
