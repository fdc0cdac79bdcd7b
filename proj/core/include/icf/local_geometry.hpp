#pragma once

#include "icf/errors.hpp"

#include <Eigen/Core>
#include <Eigen/LU>

#include <array>
#include <cmath>
#include <span>
#include <string>
#include <vector>

namespace icf {

/// sigma_0..sigma_n of the entries of `kappa` (plain, unnormalized).
inline std::vector<double> elementary_symmetric(std::span<const double> kappa) {
  std::vector<double> e(kappa.size() + 1, 0.0);
  e[0] = 1.0;
  for (std::size_t i = 0; i < kappa.size(); ++i) {
    for (std::size_t k = i + 1; k >= 1; --k) e[k] += kappa[i] * e[k - 1];
  }
  return e;
}

/// sigma_k(kappa); zero for k outside [0, n].
inline double elementary_symmetric(std::span<const double> kappa, int k) {
  if (k < 0 || k > static_cast<int>(kappa.size())) return 0.0;
  return elementary_symmetric(kappa)[k];
}

/// Pointwise extrinsic geometry of the radial graph X = f p over an
/// n-dimensional round sphere, in a chart where the round metric is `sigma`.
template <int N>
struct LocalGeometry {
  using Mat = Eigen::Matrix<double, N, N>;
  using Vec = Eigen::Matrix<double, N, 1>;

  Mat g;
  Mat g_inv;
  Mat h;
  Mat shape;            // g^{-1} h (mixed h_i^j)
  double w = 1.0;       // sqrt(1 + |grad log f|^2)
  double area_density = 1.0;  // dmu / dmu_sphere
  double H = 0.0;
  double A2 = 0.0;
  double A0_2 = 0.0;
  std::array<double, N> kappa{};
  std::array<double, N + 1> sigma{};
};

/// `D` is grad log f (covariant components), `M` the covariant Hessian of
/// log f, `sigma` the round metric at the node.
template <int N>
LocalGeometry<N> local_geometry(double f, const typename LocalGeometry<N>::Vec& D,
                                const typename LocalGeometry<N>::Mat& M,
                                const typename LocalGeometry<N>::Mat& sigma) {
  using Mat = typename LocalGeometry<N>::Mat;
  LocalGeometry<N> out;
  const Mat sigma_inv = sigma.inverse();
  const double grad2 = D.dot(sigma_inv * D);
  if (!std::isfinite(f) || !std::isfinite(grad2) || !M.allFinite()) {
    throw ResolutionError("non-finite derivative values");
  }
  // Eigenvalues of sigma^{-1} g / f^2 are 1 (multiplicity n-1) and 1 + |D|^2.
  if (1.0 + grad2 > 1e8) throw ResolutionError("first fundamental form is ill-conditioned");
  const Mat DD = D * D.transpose();
  out.w = std::sqrt(1.0 + grad2);
  out.g = f * f * (sigma + DD);
  out.h = (f / out.w) * (sigma + DD - M);
  out.g_inv = out.g.inverse();
  out.shape = out.g_inv * out.h;
  out.area_density = std::pow(f, N) * out.w;
  out.H = out.shape.trace();
  out.A2 = (out.shape * out.shape).trace();
  out.A0_2 = out.A2 - out.H * out.H / N;

  if constexpr (N == 1) {
    out.kappa[0] = out.shape(0, 0);
  } else if constexpr (N == 2) {
    // (kappa_2 - kappa_1)^2 from the entries directly, accurate near umbilics.
    const auto& S = out.shape;
    const double split2 = std::max(0.0, (S(0, 0) - S(1, 1)) * (S(0, 0) - S(1, 1)) + 4.0 * S(0, 1) * S(1, 0));
    const double split = std::sqrt(split2);
    out.kappa[0] = 0.5 * (out.H - split);
    out.kappa[1] = 0.5 * (out.H + split);
    out.A0_2 = 0.5 * split2;
  } else {
    static_assert(N == 1 || N == 2, "only curves and surfaces are discretized");
  }
  const auto e = elementary_symmetric(out.kappa);
  for (int k = 0; k <= N; ++k) out.sigma[k] = e[k];
  return out;
}

}  // namespace icf
