#pragma once

#include <algorithm>
#include <cstddef>
#include <span>
#include <vector>

namespace mhdbl {

/// Finite-difference weights for the m-th derivative at z on arbitrary nodes
/// (Fornberg's recursion). Exact on polynomials of degree < nodes.size().
inline std::vector<double> fornberg_weights(double z, std::span<const double> nodes, int m) {
  const int n = static_cast<int>(nodes.size()) - 1;
  std::vector<double> c((n + 1) * (m + 1), 0.0);
  auto at = [&](int i, int k) -> double& { return c[i * (m + 1) + k]; };
  double c1 = 1.0;
  double c4 = nodes[0] - z;
  at(0, 0) = 1.0;
  for (int i = 1; i <= n; ++i) {
    const int mn = std::min(i, m);
    double c2 = 1.0;
    const double c5 = c4;
    c4 = nodes[i] - z;
    for (int j = 0; j < i; ++j) {
      const double c3 = nodes[i] - nodes[j];
      c2 *= c3;
      if (j == i - 1) {
        for (int k = mn; k > 0; --k)
          at(i, k) = c1 * (k * at(i - 1, k - 1) - c5 * at(i - 1, k)) / c2;
        at(i, 0) = -c1 * c5 * at(i - 1, 0) / c2;
      }
      for (int k = mn; k > 0; --k) at(j, k) = (c4 * at(j, k) - k * at(j, k - 1)) / c3;
      at(j, 0) = c4 * at(j, 0) / c3;
    }
    c1 = c2;
  }
  std::vector<double> w(n + 1);
  for (int i = 0; i <= n; ++i) w[i] = at(i, m);
  return w;
}

/// One row of a banded difference operator: out_j = sum_k weights[k] * in_{start+k}.
struct StencilRow {
  std::size_t start = 0;
  std::vector<double> weights;
};

/// d^m/dy^m of the given (even) accuracy order on a uniform grid of n+1 nodes
/// with spacing h.
///
/// Interior rows are centred; rows within the stencil radius of either end use
/// one-sided stencils of m+order nodes (at least as wide as the centred
/// stencil), which keeps the order up to the boundary.
inline std::vector<StencilRow> derivative_rows(std::size_t n, double h, int m, int order = 4) {
  const std::size_t half = static_cast<std::size_t>((m + order - 1) / 2);
  const std::size_t centred = 2 * half + 1;
  const std::size_t onesided = std::max<std::size_t>(static_cast<std::size_t>(m + order), centred);
  std::vector<StencilRow> rows(n + 1);
  std::vector<double> offsets;
  for (std::size_t j = 0; j <= n; ++j) {
    StencilRow& r = rows[j];
    std::size_t width = centred;
    if (j < half) {
      r.start = 0;
      width = onesided;
    } else if (j + half > n) {
      width = onesided;
      r.start = n + 1 - width;
    } else {
      r.start = j - half;
    }
    offsets.resize(width);
    for (std::size_t k = 0; k < width; ++k)
      offsets[k] = (static_cast<double>(r.start + k) - static_cast<double>(j)) * h;
    r.weights = fornberg_weights(0.0, offsets, m);
  }
  return rows;
}

}  // namespace mhdbl
