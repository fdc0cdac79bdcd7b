#include "icf/conformal.hpp"
#include "icf/errors.hpp"
#include "rk4_reference.hpp"
#include "test_surfaces.hpp"

#include <Eigen/Geometry>
#include <gtest/gtest.h>

#include <cmath>
#include <random>

namespace {

using icf::ConformalKillingField;
using icf::QuadraticField;
using icf::SphereGrid;
using Eigen::Vector3d;

ConformalKillingField random_ckf(std::mt19937_64& rng, double scale = 1.0) {
  std::uniform_real_distribution<double> U(-scale, scale);
  ConformalKillingField V;
  V.v = {U(rng), U(rng), U(rng)};
  V.S_lower = {U(rng), U(rng), U(rng)};
  V.mu = U(rng);
  V.b = {U(rng), U(rng), U(rng)};
  return V;
}

double trace_fd(const QuadraticField& q, const Vector3d& x) {
  const double h = 1e-5;
  double tr = 0.0;
  for (int i = 0; i < 3; ++i) {
    const Vector3d e = h * Eigen::Matrix3d::Identity().col(i);
    tr += (q(x + e)[i] - q(x - e)[i]) / (2 * h);
  }
  return tr;
}

}  // namespace

TEST(Conformal, EvaluateExamples) {
  ConformalKillingField dil;
  dil.mu = 1.0;
  const Vector3d x(0.3, -1.2, 2.0);
  EXPECT_EQ(icf::evaluate(dil, x), x);
  ConformalKillingField tr;
  tr.v = {1, 2, 3};
  EXPECT_EQ(icf::evaluate(tr, x), tr.v);
  ConformalKillingField sc;
  sc.b = {1, 0, 0};
  EXPECT_EQ(icf::evaluate(sc, Vector3d(1, 1, 0)), Vector3d(0, 2, 0));
  const auto rot = ConformalKillingField::rotation({0, 0, 2});
  EXPECT_NEAR((icf::evaluate(rot, x) - Vector3d(0, 0, 2).cross(x)).norm(), 0.0, 1e-15);
  EXPECT_EQ(rot.S() + rot.S().transpose(), Eigen::Matrix3d::Zero());
}

TEST(Conformal, ParameterRoundTrip) {
  std::mt19937_64 rng(3);
  const auto V = random_ckf(rng);
  const auto W = ConformalKillingField::from_parameters(V.parameters());
  EXPECT_EQ(W.parameters(), V.parameters());
}

TEST(Conformal, Divergence) {
  ConformalKillingField V;
  V.mu = 0.5;
  EXPECT_DOUBLE_EQ(icf::divergence(V, Vector3d(1, 2, 3)), 1.5);
  EXPECT_DOUBLE_EQ(icf::conformal_factor(V, Vector3d(1, 2, 3)), 0.5);
  const auto rot = ConformalKillingField::rotation({0.3, 1, -2});
  ConformalKillingField tr;
  tr.v = {1, 1, 1};
  EXPECT_EQ(icf::divergence(rot, Vector3d(1, 2, 3)), 0.0);
  EXPECT_EQ(icf::divergence(tr, Vector3d(1, 2, 3)), 0.0);
  ConformalKillingField sc;
  sc.b = {1, 0, 0};
  const Vector3d x(0.7, -0.4, 1.1);
  EXPECT_DOUBLE_EQ(icf::divergence(sc, x), 6 * x[0]);
  EXPECT_NEAR(trace_fd(sc.field(), x), 6 * x[0], 1e-6);

  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> U(-1, 1);
  for (int trial = 0; trial < 10; ++trial) {
    const auto W = random_ckf(rng);
    const Vector3d y(U(rng), U(rng), U(rng)), d(U(rng), U(rng), U(rng));
    EXPECT_NEAR(trace_fd(W.field(), y), icf::divergence(W, y), 1e-6);
    // Affine in x: second differences vanish.
    const double h = 0.1;
    const double dd = icf::divergence(W, y + h * d) - 2 * icf::divergence(W, y) + icf::divergence(W, y - h * d);
    EXPECT_LT(std::abs(dd) / (h * h), 1e-8);
  }
}

TEST(Conformal, KillingResidual) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> U(-1, 1);
  for (int trial = 0; trial < 3; ++trial) {
    const auto V = random_ckf(rng);
    const Vector3d x(U(rng), U(rng), U(rng));
    EXPECT_LT(icf::killing_residual(V, x), 1e-12);
  }
  auto q = random_ckf(rng).field();
  q.M(0, 1) += 0.3;  // no longer skew
  EXPECT_GT(icf::killing_residual(q, Vector3d(0.1, 0.2, 0.3)), 0.1);
}

TEST(Conformal, FlowMapClosedForms) {
  ConformalKillingField dil;
  dil.mu = 0.3;
  EXPECT_NEAR((icf::flow_map(dil, 2.0, Vector3d(1, 0, 0)) - std::exp(0.6) * Vector3d(1, 0, 0)).norm(), 0.0, 1e-9);
  ConformalKillingField tr;
  tr.v = {0.5, -1, 2};
  const Vector3d x(0.2, 0.3, -0.4);
  EXPECT_NEAR((icf::flow_map(tr, 1.7, x) - (x + 1.7 * tr.v)).norm(), 0.0, 1e-9);
  const Vector3d axis(0.3, -0.5, 0.8);
  const auto rot = ConformalKillingField::rotation(axis);
  const Vector3d expected = Eigen::AngleAxisd(2.5 * axis.norm(), axis.normalized()) * x;
  EXPECT_NEAR((icf::flow_map(rot, 2.5, x) - expected).norm(), 0.0, 1e-9);
  EXPECT_EQ(icf::flow_map(rot, 0.0, x), x);
}

TEST(Conformal, FlowMapMatchesReferenceIntegrator) {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> U(-1, 1);
  for (int trial = 0; trial < 5; ++trial) {
    ConformalKillingField V;
    V.b = {U(rng), U(rng), U(rng)};
    const auto q = V.field();
    const Vector3d x(U(rng), U(rng), U(rng));
    const double t = 0.2;
    const Vector3d ref = oracle::rk4_flow([&](const Vector3d& y) { return q(y); }, t, x, 4000);
    EXPECT_NEAR((icf::flow_map(V, t, x) - ref).norm(), 0.0, 1e-8);
  }
}

TEST(Conformal, GroupLawAndBackwardFlow) {
  std::mt19937_64 rng(19);
  std::uniform_real_distribution<double> U(-1, 1);
  for (int trial = 0; trial < 5; ++trial) {
    const auto V = random_ckf(rng, 0.3);
    const Vector3d x(U(rng), U(rng), U(rng));
    const Vector3d a = icf::flow_map(V, 0.3, icf::flow_map(V, 0.4, x));
    const Vector3d b = icf::flow_map(V, 0.7, x);
    EXPECT_NEAR((a - b).norm(), 0.0, 1e-8);
    EXPECT_NEAR((icf::flow_map(V, -0.7, b) - x).norm(), 0.0, 1e-8);
  }
}

TEST(Conformal, FlowMapIsConformal) {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> U(-1, 1);
  for (int trial = 0; trial < 5; ++trial) {
    const auto V = random_ckf(rng, 0.4);
    const Vector3d x(U(rng), U(rng), U(rng));
    const auto fj = icf::flow_map_with_jacobian(V, 0.5, x);
    EXPECT_NEAR((fj.x - icf::flow_map(V, 0.5, x)).norm(), 0.0, 1e-9);
    // Orthonormal tangent pair at x.
    Vector3d e1 = Vector3d(U(rng), U(rng), U(rng)).normalized();
    Vector3d e2 = e1.unitOrthogonal();
    const Vector3d a = fj.jacobian * e1, b = fj.jacobian * e2;
    EXPECT_LT(std::abs(a.dot(b)) / (a.norm() * b.norm()), 1e-7);
    EXPECT_LT(std::abs(a.norm() / b.norm() - 1.0), 1e-7);
    // Jacobian against central differences of the flow map.
    const double h = 1e-5;
    const Vector3d fd = (icf::flow_map(V, 0.5, x + h * e1) - icf::flow_map(V, 0.5, x - h * e1)) / (2 * h);
    EXPECT_NEAR((fd - a).norm(), 0.0, 1e-5);
  }
}

TEST(Conformal, BlowUpIsDetected) {
  ConformalKillingField V;
  V.b = {1, 0, 0};
  // Along the x-axis x' = x^2, which blows up at t = 1/x0.
  EXPECT_THROW(icf::flow_map(V, 2.0, Vector3d(1, 0, 0)), icf::FlowBlowUp);
}

TEST(Conformal, QuadraticComponents) {
  std::mt19937_64 rng(29);
  for (int trial = 0; trial < 3; ++trial) {
    const auto report = icf::component_quadratic_check(random_ckf(rng).field(), trial + 1);
    EXPECT_TRUE(report.passed) << report.third_difference << " " << report.second_difference;
  }
  ConformalKillingField V;
  V.b = {1, 0, 0};
  V.mu = 0.4;
  // alpha = mu + 2 x_1, so D_1 alpha = 2 and D_1 D_1 V^1 = 2.
  const auto q = V.field();
  const double h = 0.1;
  const Vector3d x(0.3, 0.2, -0.1), e(h, 0, 0);
  EXPECT_NEAR((q(x + e)[0] - 2 * q(x)[0] + q(x - e)[0]) / (h * h), 2.0, 1e-10);
  EXPECT_TRUE(icf::component_quadratic_check(q).passed);
}

TEST(Pushforward, Identity) {
  const auto g = SphereGrid::make({16, 32});
  const auto s = oracle::seeded_harmonic(g, 5);
  std::mt19937_64 rng(31);
  const auto out = icf::pushforward_surface(random_ckf(rng), 0.0, s);
  for (std::size_t k = 0; k < g->size(); ++k) EXPECT_EQ(out.f()[k], s.f()[k]);
}

TEST(Pushforward, DilationAndRotation) {
  const auto g = SphereGrid::make({16, 32});
  const auto s = oracle::seeded_harmonic(g, 5);
  ConformalKillingField dil;
  dil.mu = 0.4;
  const auto scaled = icf::pushforward_surface(dil, 0.5, s);
  for (std::size_t k = 0; k < g->size(); ++k) EXPECT_NEAR(scaled.f()[k], std::exp(0.2) * s.f()[k], 1e-9);

  const double psi = 0.7;
  const auto rot = icf::pushforward_surface(ConformalKillingField::rotation({0, 0, 1}), psi, s);
  const auto interp = g->interpolant(s.f());
  for (int i = 0; i < g->n_theta(); ++i) {
    for (int j = 0; j < g->n_phi(); ++j) EXPECT_NEAR(rot.f()(i, j), interp(g->theta(i), g->phi(j) - psi), 1e-9);
  }
}

TEST(Pushforward, InversionOfSphereThroughDilation) {
  const auto g = SphereGrid::make({16, 32});
  const double R = 1.7;
  const auto s = oracle::sphere(g, R);
  ConformalKillingField dil;
  dil.mu = 1.0;
  const auto mapped = icf::pushforward_surface(dil, -2.0 * std::log(R), s);
  const auto inverted = s.invert();
  for (std::size_t k = 0; k < g->size(); ++k) EXPECT_NEAR(mapped.f()[k], inverted.f()[k], 1e-9);
}

TEST(Pushforward, SpecialConformalKeepsSpheresRound) {
  const auto g = SphereGrid::make({24, 48});
  ConformalKillingField V;
  V.b = {0.1, -0.05, 0.2};
  const auto mapped = icf::pushforward_surface(V, 0.3, oracle::sphere(g, 1.0));
  const auto geo = icf::geometry(mapped);
  double spread = 0.0;
  for (std::size_t k = 0; k < geo.size(); ++k) spread = std::max(spread, std::sqrt(geo.A0_2[k]));
  EXPECT_LT(spread, 1e-6);
}

TEST(Pushforward, NotStarShapedIsReported) {
  const auto g = SphereGrid::make({16, 32});
  ConformalKillingField tr;
  tr.v = {3.0, 0, 0};
  EXPECT_THROW(icf::pushforward_surface(tr, 1.0, oracle::sphere(g, 1.0)), icf::NotStarShaped);
}
