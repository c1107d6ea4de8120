#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

#include "mhdbl/errors.hpp"
#include "mhdbl/field.hpp"
#include "mhdbl/grid.hpp"
#include "mhdbl/spectral.hpp"

namespace mhdbl {

/// Snapshot of the boundary-layer unknowns at time t.
///
/// (u, f) are prognostic; (v, g) are always recomputed from them through the
/// divergence-free constraint and the wall conditions v = g = 0 at y = 0.
/// The envelope constants describe the structural hypothesis
///   f >= c <y>^-delta,   |d_y^j f| <= derivBound <y>^(-delta-j)  (j = 1, 2).
struct State {
  double t = 0.0;
  Field u, f, v, g;
  double c = 0.0;
  double delta = 0.0;
  double derivBound = 0.0;
};

struct InitialDataSpec {
  double c0 = 1.0;
  double delta = 2.0;
  double ampU = 0.1;
  double ampF = 0.1;
  int mode = 1;
};

/// v = -int_0^y d_x u,  g = -int_0^y d_x f.
///
/// Uses the end-corrected (4th-order) antiderivative so that d_y v = -d_x u
/// holds to the same order as the normal stencils.
inline std::pair<Field, Field> reconstruct(const Field& u, const Field& f, const Grid& grid) {
  Field v = integrate_y_from_0(dx(u, 1), grid, Antiderivative::EndCorrected);
  Field g = integrate_y_from_0(dx(f, 1), grid, Antiderivative::EndCorrected);
  v *= -1.0;
  g *= -1.0;
  return {std::move(v), std::move(g)};
}

inline void refresh_derived(State& s, const Grid& grid) {
  auto [v, g] = reconstruct(s.u, s.f, grid);
  s.v = std::move(v);
  s.g = std::move(g);
}

struct EnvelopeReport {
  double minRatio = 0.0;   ///< min over nodes of f <y>^delta
  double maxRatio1 = 0.0;  ///< max over nodes of |d_y f| <y>^(delta+1)
  double maxRatio2 = 0.0;  ///< max over nodes of |d_y^2 f| <y>^(delta+2)
  bool lowerOk = false;
  bool upperOk = false;
  bool passes() const noexcept { return lowerOk && upperOk; }
};

inline EnvelopeReport scan_envelope(const Field& f, double delta, const Grid& grid) {
  const Field f1 = dy(f, 1, grid);
  const Field f2 = dy(f, 2, grid);
  const auto& y = grid.yNodes();
  EnvelopeReport r;
  r.minRatio = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < f.rows(); ++j) {
    const double w0 = weight(y[j], delta);
    const double w1 = weight(y[j], delta + 1.0);
    const double w2 = weight(y[j], delta + 2.0);
    for (std::size_t i = 0; i < f.nx(); ++i) {
      r.minRatio = std::min(r.minRatio, f(j, i) * w0);
      r.maxRatio1 = std::max(r.maxRatio1, std::abs(f1(j, i)) * w1);
      r.maxRatio2 = std::max(r.maxRatio2, std::abs(f2(j, i)) * w2);
    }
  }
  return r;
}

/// Scan every node against the state's envelope constants.
inline EnvelopeReport check_envelope(const State& s, const Grid& grid) {
  EnvelopeReport r = scan_envelope(s.f, s.delta, grid);
  constexpr double slack = 1e-12;
  r.lowerOk = std::isfinite(r.minRatio) && r.minRatio >= s.c * (1.0 - slack) && r.minRatio > 0.0;
  r.upperOk = std::max(r.maxRatio1, r.maxRatio2) <= s.derivBound * (1.0 + slack);
  return r;
}

/// Admissible initial data:
///   f0 = c0 (1 + ampF cos(mode x) exp(-y^2)) <y>^-delta,
///   u0 = ampU sin(mode x) y^2 exp(-y).
/// exp(-y^2) has zero slope at the wall, so d_y f0 = 0 there. The state's lower
/// constant is c = 0.9 c0 and the derivative bound is the measured initial
/// maximum with 10% headroom.
inline State make_initial_data(const InitialDataSpec& spec, const Grid& grid) {
  if (!(spec.c0 >= 0.0)) throw InvalidParameter("c0", "must be >= 0");
  if (std::abs(spec.delta - grid.delta()) > 1e-14)
    throw InvalidParameter("delta", "initial data and grid disagree on delta");
  if (spec.mode < 0 || spec.mode > dealias_cutoff(grid.nx()))
    throw InvalidParameter("mode", "must lie in 0..Nx/3 (dealiased band)");

  const double k = spec.mode;
  State s;
  s.delta = spec.delta;
  s.f = grid.sample([&](double x, double y) {
    return spec.c0 * (1.0 + spec.ampF * std::cos(k * x) * std::exp(-y * y)) * weight(y, -spec.delta);
  });
  s.u = grid.sample(
      [&](double x, double y) { return spec.ampU * std::sin(k * x) * y * y * std::exp(-y); });
  refresh_derived(s, grid);

  s.c = 0.9 * spec.c0;
  const EnvelopeReport r = scan_envelope(s.f, s.delta, grid);
  if (!(r.minRatio >= s.c * (1.0 - 1e-12)))
    throw EnvelopeViolation("initial data violate f >= c <y>^-delta: min ratio " +
                            std::to_string(r.minRatio) + " < c = " + std::to_string(s.c));
  s.derivBound = 1.1 * std::max(r.maxRatio1, r.maxRatio2);
  return s;
}

/// Discrete L^2 norms of d_x u + d_y v and d_x f + d_y g.
inline std::pair<double, double> divergence_residuals(const State& s, const Grid& grid) {
  const Field du = dx(s.u, 1) + dy(s.v, 1, grid);
  const Field df = dx(s.f, 1) + dy(s.g, 1, grid);
  return {weighted_l2(du, 0.0, grid), weighted_l2(df, 0.0, grid)};
}

}  // namespace mhdbl
