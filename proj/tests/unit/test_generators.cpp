#include "icf/errors.hpp"
#include "icf/invariants.hpp"
#include "icf/surfaces.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

namespace {

icf::GridPtr grid(int nt = 24) { return icf::SphereGrid::make({nt, 2 * nt}); }

TEST(RealHarmonic, OrthonormalByQuadrature) {
  const auto g = grid(24);
  std::vector<std::pair<int, int>> lm;
  for (int l = 0; l <= 5; ++l)
    for (int m = -l; m <= l; ++m) lm.emplace_back(l, m);
  std::vector<icf::ScalarField> Y;
  for (auto [l, m] : lm) Y.push_back(g->sample([=](double t, double p) { return icf::real_spherical_harmonic(l, m, t, p); }));
  for (std::size_t a = 0; a < Y.size(); ++a) {
    for (std::size_t b = a; b < Y.size(); ++b) {
      icf::ScalarField prod(g);
      for (std::size_t k = 0; k < prod.size(); ++k) prod[k] = Y[a][k] * Y[b][k];
      EXPECT_NEAR(g->integrate(prod), a == b ? 1.0 : 0.0, 1e-13) << lm[a].first << "," << lm[a].second << " "
                                                                 << lm[b].first << "," << lm[b].second;
    }
  }
}

TEST(RealHarmonic, ClosedForms) {
  const double t = 0.7, p = 1.3;
  EXPECT_NEAR(icf::real_spherical_harmonic(0, 0, t, p), 0.5 / std::sqrt(std::numbers::pi), 1e-15);
  const double c1 = std::sqrt(3.0 / (4 * std::numbers::pi));
  EXPECT_NEAR(icf::real_spherical_harmonic(1, 0, t, p), c1 * std::cos(t), 1e-15);
  EXPECT_NEAR(icf::real_spherical_harmonic(1, 1, t, p), c1 * std::sin(t) * std::cos(p), 1e-15);
  EXPECT_NEAR(icf::real_spherical_harmonic(1, -1, t, p), c1 * std::sin(t) * std::sin(p), 1e-15);
  const double c2 = 0.25 * std::sqrt(15.0 / std::numbers::pi);
  EXPECT_NEAR(icf::real_spherical_harmonic(2, 2, t, p), c2 * std::pow(std::sin(t), 2) * std::cos(2 * p), 1e-15);
  EXPECT_THROW(icf::real_spherical_harmonic(1, 2, t, p), icf::InvalidArgument);
}

TEST(Generators, SphereAndSpheroid) {
  const auto g = grid();
  const auto s = icf::make_sphere(g, 1.0);
  EXPECT_NEAR(icf::willmore(s), 16 * std::numbers::pi, 1e-10);
  const auto e = icf::make_spheroid(g, 1.0, 0.6);
  for (int i = 0; i < g->n_theta(); ++i) {
    const double th = g->theta(i);
    const double expected = 1.0 / std::sqrt(std::pow(std::sin(th), 2) + std::pow(std::cos(th) / 0.6, 2));
    EXPECT_DOUBLE_EQ(e.f()(i, 3), expected);
  }
  EXPECT_THROW(icf::make_sphere(g, 0.0), icf::InvalidArgument);
  EXPECT_THROW(icf::make_spheroid(g, 1.0, -1.0), icf::InvalidArgument);
}

TEST(Generators, HarmonicAndPositivity) {
  const auto g = grid();
  const auto h = icf::make_harmonic(g, 1.0, {{2, 2, 0.1}});
  EXPECT_GT(h.f().max(), 1.0);
  EXPECT_LT(h.f().min(), 1.0);
  EXPECT_THROW(icf::make_harmonic(g, 0.1, {{0, 0, -1.0}}), icf::DegenerateSurface);
  EXPECT_THROW(icf::make_harmonic(g, 1.0, {{2, 3, 0.1}}), icf::InvalidArgument);
}

TEST(Generators, HarmonicMatchesPointwiseSum) {
  const auto g = grid(16);
  const std::vector<icf::HarmonicTerm> terms{{0, 0, 0.3}, {1, -1, 0.05}, {3, 2, -0.04}, {4, -3, 0.02}, {5, 5, 0.01}};
  const auto h = icf::make_harmonic(g, 0.9, terms);
  for (int i = 0; i < g->n_theta(); ++i) {
    for (int j = 0; j < g->n_phi(); ++j) {
      double v = 0.9;
      for (const auto& t : terms) v += t.amplitude * icf::real_spherical_harmonic(t.l, t.m, g->theta(i), g->phi(j));
      EXPECT_NEAR(h.f()(i, j), v, 1e-15);
    }
  }
}

TEST(Generators, ResamplePreservesBandLimitedSurface) {
  const auto coarse = icf::make_harmonic(grid(24), 1.0, {{3, 1, 0.05}, {2, -2, 0.03}});
  const auto fine_direct = icf::make_harmonic(grid(32), 1.0, {{3, 1, 0.05}, {2, -2, 0.03}});
  const auto fine = icf::resample(coarse, grid(32));
  for (std::size_t k = 0; k < fine.f().size(); ++k) EXPECT_NEAR(fine.f()[k], fine_direct.f()[k], 1e-10);
}

}  // namespace
