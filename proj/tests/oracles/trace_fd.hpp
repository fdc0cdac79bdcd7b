#pragma once

#include "icf/flow.hpp"
#include "icf/sphere_grid.hpp"

#include <algorithm>
#include <vector>

namespace oracle {

/// d/dt of a trace column at every record, from the Fornberg weights of the
/// (up to) `points` nearest records. Times need not be uniform.
inline std::vector<double> fd_derivative(const std::vector<double>& t, const std::vector<double>& y, int points = 5) {
  const int n = static_cast<int>(t.size());
  std::vector<double> out(n);
  const int m = std::min(points, n);
  for (int i = 0; i < n; ++i) {
    int lo = std::clamp(i - m / 2, 0, n - m);
    std::vector<double> nodes(t.begin() + lo, t.begin() + lo + m);
    const Eigen::MatrixXd w = icf::fornberg_weights(t[i], nodes, 1);
    double d = 0.0;
    for (int k = 0; k < m; ++k) d += w(1, k) * y[lo + k];
    out[i] = d;
  }
  return out;
}

}  // namespace oracle
