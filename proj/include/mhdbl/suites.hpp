#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "mhdbl/config.hpp"
#include "mhdbl/diagnostics.hpp"
#include "mhdbl/heat_oracle.hpp"
#include "mhdbl/mms.hpp"
#include "mhdbl/verify.hpp"

namespace mhdbl {

namespace detail {

inline double spread(const std::vector<double>& v) {
  const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
  return (*hi - *lo) / std::abs(*lo);
}

inline std::vector<double> spacings(const std::vector<std::size_t>& ny, double ymax) {
  std::vector<double> h;
  for (std::size_t n : ny) h.push_back(ymax / double(n));
  return h;
}

inline InitialDataSpec x_independent(const RunConfig& c) {
  InitialDataSpec s = c.initial;
  s.mode = 0;
  s.ampU = 0.0;
  return s;
}

/// Solver run from x-independent data on the oracle grid.
struct HeatRun {
  Grid grid;
  State initial;
  State final;
};

inline HeatRun heat_run(const RunConfig& c) {
  Grid grid = build_grid(c.heatNx, c.heatNy, c.heatYmax, c.ell, c.delta);
  State s0 = make_initial_data(x_independent(c), grid);
  SolverConfig cfg = c.solver;
  cfg.dt = c.heatDt;
  cfg.tEnd = c.heatTEnd;
  State s1 = advance(s0, cfg, grid);
  return {std::move(grid), std::move(s0), std::move(s1)};
}

}  // namespace detail

/// x-independent data stay on the invariant manifold u = 0, f = f(t, y), where
/// the system reduces to the heat equation; compare with the 1D oracle on a
/// grid refined heat_refine times.
inline VerificationReport suite_oracle_heat(const RunConfig& c) {
  const auto run = detail::heat_run(c);
  const InitialDataSpec spec = detail::x_independent(c);
  const std::size_t nyo = c.heatNy * static_cast<std::size_t>(c.heatRefine);
  std::vector<double> f0(nyo + 1);
  for (std::size_t j = 0; j <= nyo; ++j) {
    const double y = c.heatYmax * double(j) / double(nyo);
    f0[j] = spec.c0 * (1.0 + spec.ampF * std::exp(-y * y)) * weight(y, -spec.delta);
  }
  const auto F = heat_oracle_1d(f0, c.heatDt, c.heatTEnd, nyo, c.heatYmax,
                                HeatTop::robin(top_robin_coefficient(run.grid)));
  double du = maxAbsDiff(run.final.u, run.initial.u);
  double df = 0.0;
  for (std::size_t j = 0; j < run.grid.rows(); ++j)
    for (double v : run.final.f.row(j))
      df = std::max(df, std::abs(v - F[j * static_cast<std::size_t>(c.heatRefine)]));

  VerificationReport rep;
  rep.name = "oracle-heat";
  rep.columns = {"nx", "ny", "t_end", "max_du", "max_df_oracle"};
  rep.rows.push_back({double(c.heatNx), double(c.heatNy), run.final.t, du, df});
  rep.require_at_most("max|u(T)-u(0)|", du, c.heatTolU);
  rep.require_at_most("max|f(T)-oracle|", df, c.heatTolF);
  return rep;
}

/// y-refinement with a tiny step; every run is repeated at 2 nx to expose any
/// x-error in band-limited data.
inline VerificationReport suite_mms_space(const RunConfig& c) {
  const MmsCase mc{c.mmsAmp, c.initial.c0, c.delta};
  SolverConfig cfg = c.solver;
  cfg.tEnd = c.mmsSpaceTEnd;
  VerificationReport rep;
  rep.name = "mms-space";
  rep.columns = {"nx", "ny", "dt", "err_u", "err_f", "err", "x_diff"};
  std::vector<double> errs;
  double xmax = 0.0;
  for (std::size_t ny : c.mmsNyList) {
    const MmsOutcome a = run_mms_once(mc, {c.mmsNx, ny, c.mmsSpaceDt}, cfg, c.mmsYmax, c.ell);
    const MmsOutcome b =
        run_mms_once(mc, {2 * c.mmsNx, ny, c.mmsSpaceDt}, cfg, c.mmsYmax, c.ell);
    double xd = 0.0;
    for (std::size_t j = 0; j < a.numeric.u.rows(); ++j)
      for (std::size_t i = 0; i < c.mmsNx; ++i)
        xd = std::max({xd, std::abs(a.numeric.u(j, i) - b.numeric.u(j, 2 * i)),
                       std::abs(a.numeric.f(j, i) - b.numeric.f(j, 2 * i))});
    const double e = std::hypot(a.errU, a.errF);
    errs.push_back(e);
    xmax = std::max(xmax, xd);
    rep.rows.push_back({double(c.mmsNx), double(ny), c.mmsSpaceDt, a.errU, a.errF, e, xd});
  }
  rep.require_at_least("fitted y-order", fit_order(detail::spacings(c.mmsNyList, c.mmsYmax), errs),
                       c.mmsMinSpaceOrder);
  rep.require_at_most("max x-error (nx vs 2nx)", xmax, c.mmsXTol);
  return rep;
}

/// Temporal study on one grid. Errors against the exact solution carry the
/// spatial error of that grid, which backward Euler on f sits below; the order
/// is fitted on the distance to a same-grid run with dt / mms_time_ref_factor.
inline VerificationReport suite_mms_time(const RunConfig& c) {
  const MmsCase mc{c.mmsAmp, c.initial.c0, c.delta};
  SolverConfig cfg = c.solver;
  cfg.tEnd = c.mmsTimeTEnd;
  const double dtMin = *std::min_element(c.mmsTimeDtList.begin(), c.mmsTimeDtList.end());
  const MmsOutcome ref = run_mms_once(mc, {c.mmsNx, c.mmsTimeNy, dtMin / c.mmsTimeRefFactor},
                                      cfg, c.mmsYmax, c.ell);
  const Grid grid = build_grid(c.mmsNx, c.mmsTimeNy, c.mmsYmax, c.ell, c.delta);

  VerificationReport rep;
  rep.name = "mms-time";
  rep.columns = {"nx", "ny", "dt", "err_u", "err_f", "err", "dist_ref"};
  std::vector<double> dist;
  for (double dt : c.mmsTimeDtList) {
    const MmsOutcome o = run_mms_once(mc, {c.mmsNx, c.mmsTimeNy, dt}, cfg, c.mmsYmax, c.ell);
    const double du = weighted_l2(o.numeric.u - ref.numeric.u, 0.0, grid);
    const double df = weighted_l2(o.numeric.f - ref.numeric.f, 0.0, grid);
    dist.push_back(std::hypot(du, df));
    rep.rows.push_back({double(c.mmsNx), double(c.mmsTimeNy), dt, o.errU, o.errF,
                        std::hypot(o.errU, o.errF), dist.back()});
  }
  rep.rows.push_back({double(c.mmsNx), double(c.mmsTimeNy), dtMin / c.mmsTimeRefFactor, ref.errU,
                      ref.errF, std::hypot(ref.errU, ref.errF), 0.0});
  rep.notes.push_back("last row: reference run");
  rep.require_at_least("fitted time order", fit_order(c.mmsTimeDtList, dist),
                       c.mmsMinTimeOrder);
  return rep;
}

namespace detail {

inline std::vector<Grid> family_grids(const RunConfig& c) {
  std::vector<Grid> out;
  for (std::size_t ny : c.familyNyList)
    out.push_back(build_grid(c.familyNx, ny, c.familyYmax, c.ell, c.delta));
  return out;
}

}  // namespace detail

inline VerificationReport suite_cancellation(const RunConfig& c) {
  VerificationReport rep;
  rep.name = "cancellation";
  rep.columns = {"ny", "residual"};
  std::vector<double> res;
  for (std::size_t ny : c.familyNyList) {
    const Grid g = build_grid(c.familyNx, ny, c.cancelYmax, c.ell, c.delta);
    const State s = make_initial_data(c.initial, g);
    res.push_back(cancellation_residual(s, g));
    rep.rows.push_back({double(g.ny()), res.back()});
  }
  rep.require_at_least("fitted y-order",
                       fit_order(detail::spacings(c.familyNyList, c.cancelYmax), res),
                       c.cancelMinOrder);
  rep.require_at_most("residual at finest ny", res.back(), c.cancelTol);
  return rep;
}

/// Additive vs product form of psi on the default state and on u = 0.
inline VerificationReport suite_good_unknowns(const RunConfig& c) {
  VerificationReport rep;
  rep.name = "good-unknowns";
  rep.columns = {"ny", "discrepancy_default", "discrepancy_u0", "envelope_ok"};
  double finest = 0.0;
  for (const Grid& g : detail::family_grids(c)) {
    InitialDataSpec noFlow = c.initial;
    noFlow.ampU = 0.0;
    const State a = make_initial_data(c.initial, g);
    const State b = make_initial_data(noFlow, g);
    const bool ok = check_envelope(a, g).passes() && check_envelope(b, g).passes();
    const double da = good_unknowns(a, g).discrepancy;
    const double db = good_unknowns(b, g).discrepancy;
    rep.rows.push_back({double(g.ny()), da, db, double(ok)});
    finest = std::max(da, db);
    if (!ok) rep.notes.push_back("envelope check failed at ny=" + std::to_string(g.ny()));
  }
  rep.require_at_most("max discrepancy at finest ny", finest, c.goodUnknownsTol);
  return rep;
}

/// Wall identities for d_y^3 f and d_y^5 f: decay under joint (dy, dt)
/// refinement on an evolved state, and vanishing on the x-independent run.
inline VerificationReport suite_boundary(const RunConfig& c) {
  VerificationReport rep;
  rep.name = "boundary";
  rep.columns = {"ny", "dt", "b3", "b5"};
  std::vector<double> b3, b5;
  const double ny0 = double(c.familyNyList.front());
  for (const Grid& g : detail::family_grids(c)) {
    SolverConfig cfg = c.solver;
    cfg.dt = c.boundaryDt * ny0 / double(g.ny());
    cfg.tEnd = c.boundaryTEnd;
    const State s = advance(make_initial_data(c.initial, g), cfg, g);
    b3.push_back(boundary_identity_b3(s, g));
    b5.push_back(boundary_identity_b5(s, g));
    rep.rows.push_back({double(g.ny()), cfg.dt, b3.back(), b5.back()});
  }
  const auto h = detail::spacings(c.familyNyList, c.familyYmax);
  rep.require_at_least("b3 fitted order", fit_order(h, b3), c.boundaryMinOrder);
  rep.require_at_least("b5 fitted order", fit_order(h, b5), c.boundaryMinOrder);

  const auto run = detail::heat_run(c);
  const double z3 = boundary_identity_b3(run.final, run.grid);
  const double z5 = boundary_identity_b5(run.final, run.grid);
  rep.rows.push_back({double(c.heatNy), c.heatDt, z3, z5});
  rep.require_at_most("b3 on x-independent run", z3, c.boundaryZeroTol);
  rep.require_at_most("b5 on x-independent run", z5, c.boundaryZeroTol);
  rep.notes.push_back("last row: x-independent run on the oracle-heat grid");
  return rep;
}

inline VerificationReport suite_commutator(const RunConfig& c) {
  VerificationReport rep =
      bench_commutator(c.commutatorSigma, c.commutatorNxList, c.commutatorTrials, c.seed);
  const auto mx = rep.column("max_ratio");
  rep.require_at_most("max-ratio growth finest/coarsest", mx.back() / mx.front(),
                      c.commutatorMaxGrowth);
  return rep;
}

inline VerificationReport suite_hardy(const RunConfig& c) {
  std::vector<Grid> grids = detail::family_grids(c);
  std::vector<State> states;
  for (const Grid& g : grids) states.push_back(make_initial_data(c.initial, g));
  VerificationReport rep = bench_hardy(states, grids);
  std::vector<double> ratios;
  for (const auto& r : rep.rows)
    if (r[2] == 0.0 && r[3] == 0.0) ratios.push_back(r[1]);
  const double sp = ratios.size() == states.size() ? detail::spread(ratios) : std::nan("");
  rep.require_at_most("relative spread across ny", sp, c.hardyMaxSpread);
  return rep;
}

inline VerificationReport suite_trace(const RunConfig& c) {
  const Grid g = build_grid(c.traceNx, c.traceNy, c.traceYmax, c.ell, c.delta);
  VerificationReport rep = bench_trace_inequality(g, c.traceTrials, c.seed);
  const auto a = rep.column("lhs_over_rhs");
  const auto b = rep.column("rhs_over_E");
  rep.require_at_most("max lhs/rhs", *std::max_element(a.begin(), a.end()), 1.0 + c.traceSlack);
  rep.require_at_most("max rhs/E", *std::max_element(b.begin(), b.end()), 1.0 + c.traceSlack);
  return rep;
}

inline VerificationReport suite_energy(const RunConfig& c) {
  SolverConfig cfg = c.solver;
  cfg.dt = c.energyDt;
  cfg.tEnd = c.energyTEnd;
  cfg.outputEvery = c.energyOutputEvery;
  std::vector<EnergyRun> runs;
  for (std::size_t k = 0; k < c.energyNxList.size(); ++k)
    runs.push_back({c.energyNxList[k], c.energyNyList[k]});
  VerificationReport rep = bench_energy_inequality(c.initial, runs, cfg, c.ymax, c.ell);
  const auto finite = rep.column("all_finite");
  const auto lost = rep.column("positivity_lost_t");
  const auto env = rep.column("min_env_ratio");
  double bad = 0.0;
  for (std::size_t k = 0; k < finite.size(); ++k) bad += (finite[k] == 0.0) + (lost[k] >= 0.0);
  rep.require_at_most("runs with non-finite C* or lost positivity", bad, 0.0);
  rep.require_at_most("max C* relative spread", detail::spread(rep.column("max_cstar")),
                      c.energyMaxSpread);
  rep.require_at_least("min f<y>^delta / c0", *std::min_element(env.begin(), env.end()) / c.initial.c0,
                       c.energyMinEnvelope);
  return rep;
}

struct Suite {
  std::string name;
  std::function<VerificationReport(const RunConfig&)> run;
};

/// Registered suites in the order `all` runs them.
inline const std::vector<Suite>& suites() {
  static const std::vector<Suite> list = {
      {"oracle-heat", suite_oracle_heat},   {"mms-space", suite_mms_space},
      {"mms-time", suite_mms_time},         {"cancellation", suite_cancellation},
      {"good-unknowns", suite_good_unknowns}, {"boundary", suite_boundary},
      {"commutator", suite_commutator},     {"hardy", suite_hardy},
      {"trace", suite_trace},               {"energy", suite_energy},
  };
  return list;
}

/// Suite names selected by a CLI word; "mms" expands to both MMS studies and
/// "all" to every suite. Empty for an unknown word.
inline std::vector<std::string> expand_suite(const std::string& word) {
  std::vector<std::string> out;
  if (word == "all") {
    for (const auto& s : suites()) out.push_back(s.name);
  } else if (word == "mms") {
    out = {"mms-space", "mms-time"};
  } else {
    for (const auto& s : suites())
      if (s.name == word) out.push_back(word);
  }
  return out;
}

inline VerificationReport run_suite(const std::string& name, const RunConfig& c) {
  for (const auto& s : suites())
    if (s.name == name) return s.run(c);
  throw InvalidParameter("suite", "unknown suite " + name);
}

}  // namespace mhdbl
