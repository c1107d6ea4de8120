#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "mhdbl/errors.hpp"

extern "C" {
void dgttrf_(const int* n, double* dl, double* d, double* du, double* du2, int* ipiv, int* info);
void dgttrs_(const char* trans, const int* n, const int* nrhs, const double* dl, const double* d,
             const double* du, const double* du2, const int* ipiv, double* b, const int* ldb,
             int* info);
}

namespace mhdbl {

/// Condition imposed by the 1D heat oracle at y = Ymax.
struct HeatTop {
  enum class Kind { Dirichlet, Robin } kind = Kind::Dirichlet;
  double kappa = 0.0;  ///< Robin: F_y + kappa F = 0

  static HeatTop dirichlet() { return {Kind::Dirichlet, 0.0}; }
  static HeatTop robin(double kappa) { return {Kind::Robin, kappa}; }
};

/// Crank-Nicolson for F_t = F_yy on [0, Ymax] with second-order centred
/// differences, a ghost-point Neumann condition at y = 0 and the chosen top
/// condition. f0 holds ny+1 nodal values. The step is shrunk to at most dy^2
/// so the scheme keeps the discrete maximum principle.
inline std::vector<double> heat_oracle_1d(std::span<const double> f0, double dt, double tEnd,
                                          std::size_t ny, double ymax,
                                          HeatTop top = HeatTop::dirichlet()) {
  if (f0.size() != ny + 1) throw InvalidParameter("f0", "must hold ny+1 nodal values");
  if (ny < 2) throw InvalidParameter("ny", "must be >= 2");
  if (!(dt > 0.0)) throw InvalidParameter("dt", "must be positive");
  if (!(tEnd >= 0.0)) throw InvalidParameter("t_end", "must be >= 0");
  if (!(ymax > 0.0)) throw InvalidParameter("ymax", "must be positive");

  std::vector<double> F(f0.begin(), f0.end());
  if (tEnd == 0.0) return F;

  const double h = ymax / static_cast<double>(ny);
  const auto steps = static_cast<std::size_t>(std::ceil(tEnd / std::min(dt, h * h) - 1e-9));
  const double k = tEnd / static_cast<double>(steps);
  const double r = 0.5 * k / (h * h);
  const std::size_t n = ny + 1;

  // L F as three diagonals: row j is lo[j-1] F_{j-1} + di[j] F_j + up[j] F_{j+1}.
  std::vector<double> lo(n - 1, 1.0), di(n, -2.0), up(n - 1, 1.0);
  up[0] = 2.0;  // F_{-1} = F_1
  if (top.kind == HeatTop::Kind::Robin) {
    lo[n - 2] = 2.0;  // F_{N+1} = F_{N-1} - 2 h kappa F_N
    di[n - 1] = -2.0 - 2.0 * h * top.kappa;
  } else {
    lo[n - 2] = 0.0;
    di[n - 1] = 0.0;
  }

  std::vector<double> al(n - 1), ad(n), au(n - 1), au2(n - 2);
  for (std::size_t j = 0; j + 1 < n; ++j) {
    al[j] = -r * lo[j];
    au[j] = -r * up[j];
  }
  for (std::size_t j = 0; j < n; ++j) ad[j] = 1.0 - r * di[j];
  if (top.kind == HeatTop::Kind::Dirichlet) {
    ad[n - 1] = 1.0;
    al[n - 2] = 0.0;
  }
  std::vector<int> ipiv(n);
  const int ni = static_cast<int>(n);
  int info = 0;
  dgttrf_(&ni, al.data(), ad.data(), au.data(), au2.data(), ipiv.data(), &info);
  if (info != 0) throw SingularSolve("heat oracle factorisation failed, info=" + std::to_string(info));

  if (top.kind == HeatTop::Kind::Dirichlet) F[n - 1] = 0.0;
  std::vector<double> rhs(n);
  const char trans = 'N';
  const int one = 1;
  for (std::size_t s = 0; s < steps; ++s) {
    rhs[0] = F[0] + r * (di[0] * F[0] + up[0] * F[1]);
    for (std::size_t j = 1; j + 1 < n; ++j)
      rhs[j] = F[j] + r * (lo[j - 1] * F[j - 1] + di[j] * F[j] + up[j] * F[j + 1]);
    rhs[n - 1] = top.kind == HeatTop::Kind::Dirichlet
                     ? 0.0
                     : F[n - 1] + r * (lo[n - 2] * F[n - 2] + di[n - 1] * F[n - 1]);
    dgttrs_(&trans, &ni, &one, al.data(), ad.data(), au.data(), au2.data(), ipiv.data(),
            rhs.data(), &ni, &info);
    if (info != 0) throw SingularSolve("heat oracle solve failed");
    F.swap(rhs);
  }
  return F;
}

}  // namespace mhdbl
