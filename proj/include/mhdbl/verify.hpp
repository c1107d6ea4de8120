#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <numbers>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "mhdbl/diagnostics.hpp"
#include "mhdbl/dynamics.hpp"
#include "mhdbl/heat_oracle.hpp"
#include "mhdbl/mms.hpp"
#include "mhdbl/spectral.hpp"

namespace mhdbl {

inline std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

/// Result of one experiment: a table of measurements plus threshold checks.
struct VerificationReport {
  struct Check {
    std::string name;
    double value = 0.0;
    double threshold = 0.0;
    bool atMost = true;  ///< pass iff value <= threshold (else value >= threshold)
    bool pass() const { return std::isfinite(value) && (atMost ? value <= threshold : value >= threshold); }
  };

  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
  std::vector<Check> checks;
  std::vector<std::string> notes;

  void require_at_most(std::string what, double value, double limit) {
    checks.push_back({std::move(what), value, limit, true});
  }
  void require_at_least(std::string what, double value, double limit) {
    checks.push_back({std::move(what), value, limit, false});
  }

  bool passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass(); });
  }

  std::vector<double> column(const std::string& col) const {
    const auto it = std::find(columns.begin(), columns.end(), col);
    if (it == columns.end()) throw InvalidParameter("column", "no column named " + col);
    const auto k = static_cast<std::size_t>(it - columns.begin());
    std::vector<double> out;
    for (const auto& r : rows) out.push_back(r[k]);
    return out;
  }

  std::string text() const {
    std::string out = "== " + name + " ==\n";
    if (!columns.empty()) {
      for (std::size_t k = 0; k < columns.size(); ++k) out += (k ? "  " : "") + columns[k];
      out += '\n';
      for (const auto& r : rows) {
        for (std::size_t k = 0; k < r.size(); ++k) {
          char buf[40];
          std::snprintf(buf, sizeof buf, "%s%.6e", k ? "  " : "", r[k]);
          out += buf;
        }
        out += '\n';
      }
    }
    for (const auto& c : checks) {
      char buf[256];
      std::snprintf(buf, sizeof buf, "%s %s: %.6e %s %.6e\n", c.pass() ? "PASS" : "FAIL",
                    c.name.c_str(), c.value, c.atMost ? "<=" : ">=", c.threshold);
      out += buf;
    }
    for (const auto& n : notes) out += "note: " + n + '\n';
    out += passed() ? "result: PASS\n" : "result: FAIL\n";
    return out;
  }

  /// Long format: experiment,kind,label,quantity,value,threshold,status
  std::string csv(bool header = true) const {
    std::string out;
    if (header) out = "experiment,kind,label,quantity,value,threshold,status\n";
    for (std::size_t r = 0; r < rows.size(); ++r)
      for (std::size_t k = 0; k < columns.size(); ++k)
        out += name + ",data,row" + std::to_string(r) + "," + columns[k] + "," +
               format_double(rows[r][k]) + ",,\n";
    for (const auto& c : checks)
      out += name + ",check," + c.name + "," + (c.atMost ? "<=" : ">=") + "," +
             format_double(c.value) + "," + format_double(c.threshold) + "," +
             (c.pass() ? "pass" : "fail") + "\n";
    return out;
  }
};

/// Least-squares slope of log(err) against log(1/h): the observed order.
inline double fit_order(std::span<const double> h, std::span<const double> err) {
  if (h.size() != err.size() || h.size() < 2)
    throw InvalidParameter("resolutions", "order fit needs >= 2 matching samples");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(h.size());
  for (std::size_t k = 0; k < h.size(); ++k) {
    const double x = std::log(h[k]);
    const double y = std::log(err[k]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

// ---------------------------------------------------------------------------
// manufactured solutions

struct MmsRun {
  std::size_t nx = 16;
  std::size_t ny = 128;
  double dt = 1e-4;
};

struct MmsOutcome {
  State numeric;
  State exact;
  double errU = 0.0;
  double errF = 0.0;
};

inline MmsOutcome run_mms_once(const MmsCase& mc, const MmsRun& run, const SolverConfig& base,
                               double ymax, double ell) {
  const Grid grid = build_grid(run.nx, run.ny, ymax, ell, mc.delta);
  const MmsProfiles p = mms_profiles(mc, grid);
  State s = mms_exact(mc, p, 0.0, grid);
  SolverConfig cfg = base;
  cfg.dt = run.dt;
  MmsOutcome out;
  out.numeric = advance(s, cfg, grid, mms_forcing(mc, grid));
  out.exact = mms_exact(mc, p, out.numeric.t, grid);
  out.errU = weighted_l2(out.numeric.u - out.exact.u, 0.0, grid);
  out.errF = weighted_l2(out.numeric.f - out.exact.f, 0.0, grid);
  return out;
}

/// Forced runs from the exact data; one row per run with the L^2 errors at
/// tEnd. If the runs vary ny (resp. dt) the fitted spatial (resp. temporal)
/// order is recorded as a note and returned in `order`.
inline VerificationReport run_mms(const MmsCase& mc, std::span<const MmsRun> runs,
                                  const SolverConfig& cfg, double ymax, double ell,
                                  double* order = nullptr) {
  VerificationReport rep;
  rep.name = "mms";
  rep.columns = {"nx", "ny", "dt", "err_u", "err_f", "err"};
  std::vector<double> hs, dts, errs;
  for (const auto& r : runs) {
    const MmsOutcome o = run_mms_once(mc, r, cfg, ymax, ell);
    const double e = std::hypot(o.errU, o.errF);
    rep.rows.push_back({double(r.nx), double(r.ny), r.dt, o.errU, o.errF, e});
    hs.push_back(ymax / double(r.ny));
    dts.push_back(r.dt);
    errs.push_back(e);
  }
  const bool varyY = std::adjacent_find(hs.begin(), hs.end(), std::not_equal_to<>()) != hs.end();
  const bool varyT = std::adjacent_find(dts.begin(), dts.end(), std::not_equal_to<>()) != dts.end();
  if (runs.size() >= 2 && varyY != varyT) {
    const double p = fit_order(varyY ? hs : dts, errs);
    rep.notes.push_back(std::string(varyY ? "spatial" : "temporal") + " order " + format_double(p));
    if (order) *order = p;
  }
  return rep;
}

// ---------------------------------------------------------------------------
// randomized benches

namespace detail {

/// Real periodic line from random coefficients c_k ~ N(0,1)(1 + i N(0,1)) / k^2,
/// k = 1..kmax, plus N(0,1) mean when withMean.
inline std::vector<double> random_line(std::mt19937_64& rng, std::size_t nx, int kmax,
                                       bool withMean) {
  std::normal_distribution<double> normal(0.0, 1.0);
  SpectralLine s;
  s.coefficients.assign(nx, cplx(0.0, 0.0));
  const double scale = 2.0 * std::numbers::pi;  // unit-size samples under the convention
  if (withMean) s.coefficients[0] = scale * normal(rng);
  for (int k = 1; k <= kmax; ++k) {
    const double a = normal(rng), b = normal(rng);
    const cplx c = scale * cplx(a, b) / (2.0 * double(k) * double(k));
    s.coefficients[k] = c;
    s.coefficients[nx - k] = std::conj(c);
  }
  return inverse(s);
}

inline double sup_norm(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

}  // namespace detail

/// ||[|D_x|^s, rho] w|| / ((||rho||_inf + ||rho'||_inf) ||w||).
inline double commutator_ratio(std::span<const double> rho, std::span<const double> w,
                               double sigma) {
  const auto c = commutator_multiplier(rho, w, sigma);
  return line_l2(c) /
         ((detail::sup_norm(rho) + detail::sup_norm(dx_line(rho, 1))) * line_l2(w));
}

/// commutator_ratio maximised over random trials at each resolution. rho and
/// w draw modes up to Nx/4.
inline VerificationReport bench_commutator(double sigma, std::span<const std::size_t> resolutions,
                                           int trials, std::uint64_t seed) {
  if (!(sigma > 0.0 && sigma < 1.0)) throw InvalidParameter("sigma", "must lie in (0, 1)");
  if (trials < 1) throw InvalidParameter("trials", "must be >= 1");
  VerificationReport rep;
  rep.name = "commutator";
  rep.columns = {"nx", "trials", "max_ratio", "mean_ratio"};
  for (std::size_t nx : resolutions) {
    std::mt19937_64 rng(seed);
    const int kmax = static_cast<int>(nx / 4);
    double mx = 0.0, sum = 0.0;
    for (int t = 0; t < trials; ++t) {
      const auto rho = detail::random_line(rng, nx, kmax, true);
      const auto w = detail::random_line(rng, nx, kmax, false);
      const double r = commutator_ratio(rho, w, sigma);
      mx = std::max(mx, r);
      sum += r;
    }
    rep.rows.push_back({double(nx), double(trials), mx, sum / trials});
  }
  return rep;
}

struct HardySample {
  double ratio = 0.0;
  bool degenerate = false;  ///< psi vanishes: 0/0
  bool excluded = false;    ///< g does not vanish at the wall
};

/// ||<y>^(ell-1) d_x^3 g|| / ||<y>^ell psi|| for one state.
inline HardySample hardy_ratio(const State& s, const Grid& grid, double fFloor = 0.0) {
  HardySample out;
  const double wall = detail::sup_norm(s.g.row(0));
  if (wall > 1e-12 * (s.g.maxAbs() + 1e-300)) {
    out.excluded = true;
    return out;
  }
  const GoodUnknowns gu = good_unknowns(s, grid, fFloor);
  const double num = weighted_l2(dx(s.g, 3), grid.ell() - 1.0, grid);
  const double den = weighted_l2(gu.psi, grid.ell(), grid);
  if (!(den > 1e-300)) {
    out.degenerate = true;
    return out;
  }
  out.ratio = num / den;
  return out;
}

/// Hardy ratio per (state, grid); flags spread across the admissible samples.
inline VerificationReport bench_hardy(std::span<const State> states, std::span<const Grid> grids) {
  if (states.size() != grids.size()) throw InvalidParameter("states", "one grid per state");
  VerificationReport rep;
  rep.name = "hardy";
  rep.columns = {"ny", "ratio", "degenerate", "excluded"};
  for (std::size_t k = 0; k < states.size(); ++k) {
    const HardySample h = hardy_ratio(states[k], grids[k]);
    rep.rows.push_back({double(grids[k].ny()), h.ratio, double(h.degenerate), double(h.excluded)});
  }
  return rep;
}

/// Random smooth state with u = sum_k (a_k cos kx + b_k sin kx) p_k(y) e^-y / (1 + k^2),
/// p_k a random cubic, and the default envelope f.
inline State random_smooth_state(std::mt19937_64& rng, const Grid& grid, int kmax = 4) {
  std::normal_distribution<double> normal(0.0, 1.0);
  State s = make_initial_data({1.0, grid.delta(), 0.0, 0.1, 1}, grid);
  struct Mode {
    double a, b, p[4];
  };
  std::vector<Mode> modes(static_cast<std::size_t>(kmax) + 1);
  for (auto& m : modes) {
    m.a = normal(rng);
    m.b = normal(rng);
    for (double& c : m.p) c = normal(rng);
  }
  s.u = grid.sample([&](double x, double y) {
    double v = 0.0;
    for (int k = 0; k <= kmax; ++k) {
      const Mode& m = modes[static_cast<std::size_t>(k)];
      const double poly = m.p[0] + y * (m.p[1] + y * (m.p[2] + y * m.p[3]));
      v += (m.a * std::cos(k * x) + m.b * std::sin(k * x)) * poly / (1.0 + k * k);
    }
    return v * std::exp(-y);
  });
  refresh_derived(s, grid);
  return s;
}

/// Trace inequality on seeded random smooth states.
inline VerificationReport bench_trace_inequality(const Grid& grid, int trials, std::uint64_t seed) {
  VerificationReport rep;
  rep.name = "trace";
  rep.columns = {"trial", "lhs", "rhs", "E", "lhs_over_rhs", "rhs_over_E"};
  std::mt19937_64 rng(seed);
  for (int t = 0; t < trials; ++t) {
    const State s = random_smooth_state(rng, grid);
    const TraceCheck c = trace_inequality_check(s, grid);
    rep.rows.push_back({double(t), c.lhs, c.rhs, c.energy, c.lhs / c.rhs, c.rhs / c.energy});
  }
  return rep;
}

struct EnergyRun {
  std::size_t nx = 32;
  std::size_t ny = 256;
};

struct EnergyOutcome {
  std::vector<EnergyReport> history;
  InequalityTrace trace;
  double maxCstar = 0.0;
  double minEnvelope = std::numeric_limits<double>::infinity();
  std::optional<double> positivityLostAt;
};

/// E, D and the envelope minimum sampled every cfg.outputEvery steps.
inline EnergyOutcome energy_history(const InitialDataSpec& spec, const Grid& grid,
                                    const SolverConfig& cfg) {
  EnergyOutcome out;
  auto record = [&](const State& s) {
    EnergyReport r;
    r.t = s.t;
    r.E = energy_E(s, grid);
    r.D = dissipation_D(s, grid);
    r.minEnvelopeRatio = min_envelope_ratio(s.f, s.delta, grid);
    out.minEnvelope = std::min(out.minEnvelope, r.minEnvelopeRatio);
    out.history.push_back(r);
  };
  State s = make_initial_data(spec, grid);
  record(s);
  long n = 0;
  try {
    s = advance(s, cfg, grid, {}, [&](const State&, const State& next) {
      if (++n % cfg.outputEvery == 0 || next.t >= cfg.tEnd - 1e-12) record(next);
    });
  } catch (const PositivityLost& e) {
    out.positivityLostAt = e.time();
  }
  out.trace = inequality_ratio(out.history);
  for (std::size_t k = 0; k < out.history.size(); ++k) out.history[k].Cstar = out.trace.cstar[k];
  for (double c : out.trace.cstar) out.maxCstar = std::max(out.maxCstar, c);
  return out;
}

inline VerificationReport bench_energy_inequality(const InitialDataSpec& spec,
                                                  std::span<const EnergyRun> runs,
                                                  const SolverConfig& cfg, double ymax,
                                                  double ell) {
  VerificationReport rep;
  rep.name = "energy";
  rep.columns = {"nx", "ny", "samples", "max_cstar", "min_env_ratio", "all_finite",
                 "positivity_lost_t"};
  for (const auto& r : runs) {
    const Grid grid = build_grid(r.nx, r.ny, ymax, ell, spec.delta);
    const EnergyOutcome o = energy_history(spec, grid, cfg);
    const bool finite = std::all_of(o.trace.cstar.begin(), o.trace.cstar.end(),
                                    [](double c) { return std::isfinite(c); });
    rep.rows.push_back({double(r.nx), double(r.ny), double(o.history.size()), o.maxCstar,
                        o.minEnvelope, double(finite && !o.trace.degenerate),
                        o.positivityLostAt.value_or(-1.0)});
    if (o.positivityLostAt)
      rep.notes.push_back("positivity lost at t=" + format_double(*o.positivityLostAt) +
                          " on " + std::to_string(r.nx) + "x" + std::to_string(r.ny));
  }
  return rep;
}

}  // namespace mhdbl
