#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "mhdbl/dynamics.hpp"
#include "mhdbl/errors.hpp"
#include "mhdbl/field.hpp"
#include "mhdbl/grid.hpp"
#include "mhdbl/spectral.hpp"
#include "mhdbl/state.hpp"

namespace mhdbl {

inline constexpr double kEps0 = 1e-300;

namespace detail {

// sum_{i+j<=m} ||<y>^(ell+j) d_x^i d_y^(j+shift) field||^2; shift lets D take
// d_y^(j+1) f straight from the stencil table instead of differentiating twice.
inline double sobolev_sum(const Field& field, int m, double ell, const Grid& grid, int shift) {
  double total = 0.0;
  for (int j = 0; j <= m; ++j) {
    const int oy = j + shift;
    const Field base = oy == 0 ? field : dy(field, oy, grid);
    for (int i = 0; i + j <= m; ++i) {
      const double n = weighted_l2(dx(base, i), ell + j, grid);
      total += n * n;
    }
  }
  return total;
}

}  // namespace detail

/// Squared weighted Sobolev norm sum_{i+j<=m} ||<y>^(ell+j) d_x^i d_y^j field||^2.
inline double sobolev_norm_sq(const Field& field, int m, double ell, const Grid& grid) {
  if (m < 0 || m > 4) throw InvalidParameter("m", "Sobolev order must be in 0..4");
  return detail::sobolev_sum(field, m, ell, grid, 0);
}

/// One entry of the per-derivative norm table.
struct NormEntry {
  char field;  ///< 'u' or 'f'
  int i, j;    ///< d_x^i d_y^j
  double value;
};

inline std::vector<NormEntry> norm_breakdown(const State& s, const Grid& grid) {
  std::vector<NormEntry> out;
  for (const auto& [name, fld] : {std::pair<char, const Field*>{'u', &s.u}, {'f', &s.f}}) {
    for (int j = 0; j <= 4; ++j) {
      const Field base = j == 0 ? *fld : dy(*fld, j, grid);
      for (int i = 0; i + j <= 4; ++i) {
        const double n = weighted_l2(dx(base, i), grid.ell() + j, grid);
        out.push_back({name, i, j, n * n});
      }
    }
  }
  return out;
}

inline double energy_E(const State& s, const Grid& grid) {
  return sobolev_norm_sq(s.u, 4, grid.ell(), grid) + sobolev_norm_sq(s.f, 4, grid.ell(), grid);
}

/// ||d_y f||^2 in H^4_ell; needs normal derivatives up to order 5.
inline double dissipation_D(const State& s, const Grid& grid) {
  return detail::sobolev_sum(s.f, 4, grid.ell(), grid, 1);
}

struct GoodUnknowns {
  Field psi;
  Field phi;
  double discrepancy = 0.0;  ///< max|psi - psi_product| / (max|psi| + eps)
};

/// psi = d_x^4 f + (d_y f / f) d_x^3 g,  phi = d_x^4 u + (d_y u / f) d_x^3 g.
/// The product form -f d_y(d_x^3 g / f) of psi is evaluated as a cross-check.
inline GoodUnknowns good_unknowns(const State& s, const Grid& grid, double fFloor = 0.0) {
  const double m = min_envelope_ratio(s.f, s.delta, grid);
  if (!(m > fFloor)) throw PositivityLost(s.t, m, fFloor);

  const Field g3 = dx(s.g, 3);
  const Field ratio = quotient(g3, s.f);
  GoodUnknowns out;
  out.psi = dx(s.f, 4) + hadamard(dy(s.f, 1, grid), ratio);
  out.phi = dx(s.u, 4) + hadamard(dy(s.u, 1, grid), ratio);

  Field product = hadamard(s.f, dy(ratio, 1, grid));
  product *= -1.0;
  out.discrepancy = maxAbsDiff(out.psi, product) / (out.psi.maxAbs() + kEps0);
  return out;
}

/// ((f d_x + g d_y) W phi, W psi) + ((f d_x + g d_y) W psi, W phi), W = <y>^ell,
/// minus the flux through y = Ymax, divided by ||W psi|| ||W phi||. Zero for the
/// continuous problem.
inline double cancellation_residual(const State& s, const Grid& grid, double fFloor = 0.0) {
  const GoodUnknowns gu = good_unknowns(s, grid, fFloor);
  const Field W = grid.sample([&](double, double y) { return weight(y, grid.ell()); });
  const Field a = hadamard(W, gu.phi);
  const Field b = hadamard(W, gu.psi);
  auto transport = [&](const Field& w) {
    return hadamard(s.f, dx(w, 1)) + hadamard(s.g, dy(w, 1, grid));
  };
  // On [0, Ymax] the identity picks up the outflow flux int g a b dx at the top,
  // which vanishes only on the half-line.
  const std::size_t top = grid.ny();
  double flux = 0.0;
  for (std::size_t i = 0; i < grid.nx(); ++i) flux += s.g(top, i) * a(top, i) * b(top, i);
  flux *= grid.hx();
  const double sum = weighted_inner(transport(a), b, 0.0, grid) +
                     weighted_inner(transport(b), a, 0.0, grid) - flux;
  const double scale = weighted_l2(a, 0.0, grid) * weighted_l2(b, 0.0, grid);
  return std::abs(sum) / (scale + kEps0);
}

namespace detail {

struct Traces {
  const Grid& grid;
  const Field& u;
  const Field& f;

  // d_x^i d_y^j w at y = 0: one-sided normal stencil, spectral in x.
  std::vector<double> at(const Field& w, int i, int j) const {
    std::vector<double> line;
    if (j == 0) {
      const auto r = w.row(0);
      line.assign(r.begin(), r.end());
    } else {
      line = dy_row(w, j, 0, grid);
    }
    return i == 0 ? line : dx_line(line, i);
  }
};

}  // namespace detail

/// ||d_y^3 f - 2 d_y u d_x f + f d_x d_y u||_{L^2_x} at y = 0.
inline double boundary_identity_b3(const State& s, const Grid& grid) {
  const detail::Traces tr{grid, s.u, s.f};
  const auto f3 = tr.at(s.f, 0, 3);
  const auto uy = tr.at(s.u, 0, 1);
  const auto fx = tr.at(s.f, 1, 0);
  const auto uxy = tr.at(s.u, 1, 1);
  const auto f0 = tr.at(s.f, 0, 0);
  std::vector<double> r(f3.size());
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = f3[i] - 2.0 * uy[i] * fx[i] + f0[i] * uxy[i];
  return line_l2(r);
}

/// Coefficient of d_y u d_x d_y^2 f in the fifth-derivative trace identity
/// (obtained by differentiating the f-equation twice in y at the wall).
inline constexpr double kB5ShearCoefficient = 6.0;

/// Residual of the d_y^5 f trace identity at y = 0 in L^2_x.
inline double boundary_identity_b5(const State& s, const Grid& grid) {
  const detail::Traces tr{grid, s.u, s.f};
  const auto& U = s.u;
  const auto& F = s.f;
  const auto f5 = tr.at(F, 0, 5);
  const auto u = tr.at(U, 0, 0), f = tr.at(F, 0, 0);
  const auto ux = tr.at(U, 1, 0), fx = tr.at(F, 1, 0);
  const auto uxx = tr.at(U, 2, 0), fxx = tr.at(F, 2, 0);
  const auto uy = tr.at(U, 0, 1), uxy = tr.at(U, 1, 1), uxxy = tr.at(U, 2, 1);
  const auto fyy = tr.at(F, 0, 2), fxyy = tr.at(F, 1, 2);
  const auto fyyy = tr.at(F, 0, 3), fxyyy = tr.at(F, 1, 3);
  const auto uyyy = tr.at(U, 0, 3), uxyyy = tr.at(U, 1, 3);

  std::vector<double> r(f5.size());
  for (std::size_t i = 0; i < r.size(); ++i) {
    const double rhs = u[i] * fxyyy[i] - f[i] * uxyyy[i] - 4.0 * ux[i] * fyyy[i] -
                       7.0 * uxy[i] * fyy[i] + 4.0 * fx[i] * uyyy[i] +
                       kB5ShearCoefficient * uy[i] * fxyy[i] - u[i] * fx[i] * uxy[i] +
                       u[i] * f[i] * uxxy[i] - 2.0 * u[i] * uy[i] * fxx[i] +
                       2.0 * f[i] * uy[i] * uxx[i];
    r[i] = f5[i] - rhs;
  }
  return line_l2(r);
}

struct TraceCheck {
  double lhs = 0.0;  ///< ||Lambda^(1/2) d_y^3 u(., 0)||^2
  double rhs = 0.0;  ///< 2 int ||Lambda d_y^3 u|| ||d_y^4 u|| dy
  double energy = 0.0;
  bool holds(double slack = 0.05) const {
    return lhs <= rhs * (1.0 + slack) && rhs <= energy * (1.0 + slack);
  }
};

inline TraceCheck trace_inequality_check(const State& s, const Grid& grid) {
  const Field u3 = dy(s.u, 3, grid);
  const Field u4 = dy(s.u, 4, grid);
  TraceCheck out;
  const double t0 = line_l2(lambda_sigma_line(u3.row(0), 0.5));
  out.lhs = t0 * t0;
  const Field lu3 = lambda_sigma(u3, 1.0);
  const auto& w = grid.quadWeights();
  double integral = 0.0;
  for (std::size_t j = 0; j < u3.rows(); ++j) integral += w[j] * line_l2(lu3.row(j)) * line_l2(u4.row(j));
  out.rhs = 2.0 * integral;
  out.energy = energy_E(s, grid);
  return out;
}

/// Weighted mass of the envelope c <y>^-delta beyond Ymax that the truncated
/// domain ignores: 2 pi int_Y^inf c^2 y^(2 ell - 2 delta) dy.
inline double tail_mass(double c, double delta, double ell, double ymax) {
  const double p = 2.0 * (delta - ell);
  return 2.0 * std::numbers::pi * c * c * std::pow(ymax, 1.0 - p) / (p - 1.0);
}

struct EnergyReport {
  double t = 0.0;
  double E = 0.0;
  double D = 0.0;
  std::vector<NormEntry> normBreakdown;
  double Cstar = 0.0;
  double cancelResidual = 0.0;
  double b3Residual = 0.0;
  double b5Residual = 0.0;
  double divU = 0.0;
  double divF = 0.0;
  double gEquation = 0.0;  ///< NaN when no previous state is available
  double minEnvelopeRatio = 0.0;
  double tailMass = 0.0;

  static std::string csv_header() {
    return "t,E,D,Cstar,cancel_res,b3_res,b5_res,div_u_res,div_f_res,g_eq_res,min_env_ratio,"
           "tail_mass";
  }

  std::string csv_row() const {
    std::string out;
    char buf[32];
    for (double v : {t, E, D, Cstar, cancelResidual, b3Residual, b5Residual, divU, divF,
                     gEquation, minEnvelopeRatio, tailMass}) {
      if (!out.empty()) out += ',';
      std::snprintf(buf, sizeof buf, "%.17g", v);
      out += buf;
    }
    return out;
  }
};

/// Every monitor for one state. `prev` (if given) enables the g-equation residual.
inline EnergyReport make_energy_report(const State& s, const Grid& grid,
                                       const State* prev = nullptr) {
  EnergyReport r;
  r.t = s.t;
  r.normBreakdown = norm_breakdown(s, grid);
  for (const auto& e : r.normBreakdown) r.E += e.value;
  r.D = dissipation_D(s, grid);
  r.cancelResidual = cancellation_residual(s, grid);
  r.b3Residual = boundary_identity_b3(s, grid);
  r.b5Residual = boundary_identity_b5(s, grid);
  const auto [du, df] = divergence_residuals(s, grid);
  r.divU = du;
  r.divF = df;
  r.gEquation = prev ? g_equation_residual(s, *prev, grid) : std::nan("");
  r.minEnvelopeRatio = min_envelope_ratio(s.f, s.delta, grid);
  r.tailMass = tail_mass(s.c, s.delta, grid.ell(), grid.ymax());
  return r;
}

struct InequalityTrace {
  std::vector<double> cstar;
  bool degenerate = false;  ///< zero data: the ratio is undefined and reported as 0
};

/// C*(t) = (E(t) + int_0^t D) / (E(0) + int_0^t (E + E^2)), trapezoid in time.
inline InequalityTrace inequality_ratio(std::span<const EnergyReport> history) {
  InequalityTrace out;
  if (history.empty()) return out;
  out.cstar.resize(history.size(), 0.0);
  const double e0 = history.front().E;
  if (!(e0 > kEps0)) {
    out.degenerate = true;
    return out;
  }
  double intD = 0.0, intE = 0.0;
  for (std::size_t n = 0; n < history.size(); ++n) {
    if (n > 0) {
      const auto& a = history[n - 1];
      const auto& b = history[n];
      const double h = b.t - a.t;
      intD += 0.5 * h * (a.D + b.D);
      intE += 0.5 * h * (a.E + a.E * a.E + b.E + b.E * b.E);
    }
    out.cstar[n] = (history[n].E + intD) / (e0 + intE);
  }
  return out;
}

}  // namespace mhdbl
