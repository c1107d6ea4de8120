#pragma once

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <utility>
#include <vector>

#include "mhdbl/dynamics.hpp"
#include "mhdbl/errors.hpp"
#include "mhdbl/field.hpp"
#include "mhdbl/grid.hpp"
#include "mhdbl/state.hpp"

namespace mhdbl {

/// Manufactured solution
///   u* = a e^-t sin x P(y),             P = y^2 e^-y
///   f* = c0 W(y) + c0 a e^-t cos x H(y), W = <y>^-delta, H = W e^-y^2
/// with v* = -a e^-t cos x Q(y), Q = int_0^y P, and g* = c0 a e^-t sin x G(y),
/// G = int_0^y H. The sources are what the exact fields leave behind in the
/// two evolution equations; see docs/mms.md for the derivation.
struct MmsCase {
  double a = 0.05;
  double c0 = 1.0;
  double delta = 2.0;

  void validate() const {
    if (!(c0 > 0.0)) throw InvalidParameter("c0", "must be positive");
    if (!(a >= 0.0 && a < 1.0)) throw InvalidParameter("amp", "must lie in [0, 1)");
    if (!(delta > 0.0)) throw InvalidParameter("delta", "must be positive");
  }
};

/// y-profiles of the manufactured solution at the nodes of one grid.
struct MmsProfiles {
  std::vector<double> P, P1, P2, Q;
  std::vector<double> W, W1, W2;
  std::vector<double> H, H1, H2, G;
};

inline MmsProfiles mms_profiles(const MmsCase& mc, const Grid& grid) {
  mc.validate();
  const double d = mc.delta;
  const auto& y = grid.yNodes();
  const std::size_t n = y.size();
  MmsProfiles p;
  for (auto* v : {&p.P, &p.P1, &p.P2, &p.Q, &p.W, &p.W1, &p.W2, &p.H, &p.H1, &p.H2, &p.G})
    v->resize(n);
  auto H = [d](double s) { return std::pow(1.0 + s * s, -0.5 * d) * std::exp(-s * s); };
  double G = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    const double s = y[j];
    const double e = std::exp(-s);
    const double q = 1.0 + s * s;
    p.P[j] = s * s * e;
    p.P1[j] = (2.0 * s - s * s) * e;
    p.P2[j] = (2.0 - 4.0 * s + s * s) * e;
    p.Q[j] = 2.0 - e * (s * s + 2.0 * s + 2.0);
    p.W[j] = std::pow(q, -0.5 * d);
    p.W1[j] = -d * s * std::pow(q, -0.5 * d - 1.0);
    p.W2[j] = d * std::pow(q, -0.5 * d - 2.0) * ((d + 1.0) * s * s - 1.0);
    const double eta = std::exp(-s * s);
    const double eta1 = -2.0 * s * eta;
    const double eta2 = (4.0 * s * s - 2.0) * eta;
    p.H[j] = p.W[j] * eta;
    p.H1[j] = p.W1[j] * eta + p.W[j] * eta1;
    p.H2[j] = p.W2[j] * eta + 2.0 * p.W1[j] * eta1 + p.W[j] * eta2;
    if (j > 0)
      G += boost::math::quadrature::gauss_kronrod<double, 31>::integrate(H, y[j - 1], s, 5, 1e-15);
    p.G[j] = G;
  }
  return p;
}

/// Exact (u, f, v, g) at time t on the grid.
inline State mms_exact(const MmsCase& mc, const MmsProfiles& p, double t, const Grid& grid) {
  const double A = mc.a * std::exp(-t);
  const auto& x = grid.xNodes();
  State s;
  s.t = t;
  s.delta = mc.delta;
  s.u = grid.zeros();
  s.f = grid.zeros();
  s.v = grid.zeros();
  s.g = grid.zeros();
  for (std::size_t j = 0; j < grid.rows(); ++j)
    for (std::size_t i = 0; i < grid.nx(); ++i) {
      const double sn = std::sin(x[i]), cs = std::cos(x[i]);
      s.u(j, i) = A * sn * p.P[j];
      s.f(j, i) = mc.c0 * (p.W[j] + A * cs * p.H[j]);
      s.v(j, i) = -A * cs * p.Q[j];
      s.g(j, i) = mc.c0 * A * sn * p.G[j];
    }
  s.c = 0.9 * mc.c0 * (1.0 - mc.a);
  const EnvelopeReport r = scan_envelope(s.f, s.delta, grid);
  s.derivBound = 1.1 * std::max(r.maxRatio1, r.maxRatio2);
  return s;
}

/// (S_u, S_f) at time t.
inline std::pair<Field, Field> mms_sources(const MmsCase& mc, const MmsProfiles& p, double t,
                                           const Grid& grid) {
  const double A = mc.a * std::exp(-t);
  const double c0 = mc.c0;
  const auto& x = grid.xNodes();
  Field Su = grid.zeros(), Sf = grid.zeros();
  for (std::size_t j = 0; j < grid.rows(); ++j)
    for (std::size_t i = 0; i < grid.nx(); ++i) {
      const double sn = std::sin(x[i]), cs = std::cos(x[i]);
      const double u = A * sn * p.P[j];
      const double ut = -u;
      const double ux = A * cs * p.P[j];
      const double uy = A * sn * p.P1[j];
      const double f = c0 * (p.W[j] + A * cs * p.H[j]);
      const double ft = -c0 * A * cs * p.H[j];
      const double fx = -c0 * A * sn * p.H[j];
      const double fy = c0 * (p.W1[j] + A * cs * p.H1[j]);
      const double fyy = c0 * (p.W2[j] + A * cs * p.H2[j]);
      const double v = -A * cs * p.Q[j];
      const double g = c0 * A * sn * p.G[j];
      Su(j, i) = ut + u * ux + v * uy - f * fx - g * fy;
      Sf(j, i) = ft + u * fx + v * fy - fyy - f * ux - g * uy;
    }
  return {std::move(Su), std::move(Sf)};
}

/// Forcing callback for step()/advance().
inline Forcing mms_forcing(const MmsCase& mc, const Grid& grid) {
  auto profiles = std::make_shared<MmsProfiles>(mms_profiles(mc, grid));
  return [mc, profiles, grid](double t) { return mms_sources(mc, *profiles, t, grid); };
}

}  // namespace mhdbl
