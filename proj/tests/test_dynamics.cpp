#include <gtest/gtest.h>

#include <cmath>

#include "mhdbl/banded.hpp"
#include "mhdbl/dynamics.hpp"
#include "mhdbl/heat_oracle.hpp"
#include "mhdbl/mms.hpp"

using namespace mhdbl;

namespace {

std::vector<double> column(const Field& f, std::size_t i = 0) {
  std::vector<double> out(f.rows());
  for (std::size_t j = 0; j < f.rows(); ++j) out[j] = f(j, i);
  return out;
}

double max_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) m = std::max(m, std::abs(a[j] - b[j]));
  return m;
}

// max residual of the discrete MMS operators at time t; the time derivative is
// taken by a central difference of the exact fields, independent of the sources
std::pair<double, double> mms_residual(std::size_t ny, double t) {
  const MmsCase mc;
  const Grid g = build_grid(16, ny, 20.0, 1.0, mc.delta);
  const MmsProfiles p = mms_profiles(mc, g);
  const State s = mms_exact(mc, p, t, g);
  const double eps = 1e-5;
  const State sp = mms_exact(mc, p, t + eps, g), sm = mms_exact(mc, p, t - eps, g);
  const auto [Su, Sf] = mms_sources(mc, p, t, g);
  const Field ut = (1.0 / (2 * eps)) * (sp.u - sm.u);
  const Field ft = (1.0 / (2 * eps)) * (sp.f - sm.f);
  const Field ru = rhs_u(s, g) + Su;
  const Field rf = rhs_f_explicit(s, g) + dy(s.f, 2, g) + Sf;
  // the f equation holds on rows 1..Ny-1; the end rows carry the boundary conditions
  double ef = 0.0;
  for (std::size_t j = 1; j < g.ny(); ++j)
    for (std::size_t i = 0; i < g.nx(); ++i) ef = std::max(ef, std::abs(ft(j, i) - rf(j, i)));
  return {maxAbsDiff(ut, ru), ef};
}

// oracle on a grid refined `r` times, sampled back at the coarse nodes
std::vector<double> refined_oracle(double (*f0)(double), const Grid& g, double dt, double tEnd,
                                   std::size_t r) {
  const std::size_t n = g.ny() * r;
  std::vector<double> fine(n + 1);
  for (std::size_t j = 0; j <= n; ++j) fine[j] = f0(g.ymax() * double(j) / double(n));
  const auto F = heat_oracle_1d(fine, dt, tEnd, n, g.ymax(), HeatTop::robin(top_robin_coefficient(g)));
  std::vector<double> out(g.rows());
  for (std::size_t j = 0; j < g.rows(); ++j) out[j] = F[j * r];
  return out;
}

}  // namespace

TEST(Banded, SolvesAgainstKnownSolution) {
  const std::size_t n = 12;
  BandedMatrix A(n, 2, 1);
  for (std::size_t i = 0; i < n; ++i) {
    A.set(i, i, 4.0);
    if (i + 1 < n) A.set(i, i + 1, -1.0);
    if (i >= 1) A.set(i, i - 1, -1.0);
    if (i >= 2) A.set(i, i - 2, 0.5);
  }
  std::vector<double> x(n), b(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) x[i] = std::sin(double(i));
  for (std::size_t i = 0; i < n; ++i) {
    b[i] = 4.0 * x[i];
    if (i + 1 < n) b[i] -= x[i + 1];
    if (i >= 1) b[i] -= x[i - 1];
    if (i >= 2) b[i] += 0.5 * x[i - 2];
  }
  A.factorize();
  A.solve(b, 1);
  EXPECT_LT(max_diff(b, x), 1e-14);
}

TEST(Dynamics, SolverConfigValidation) {
  SolverConfig c;
  EXPECT_NO_THROW(c.validate());
  c.cfl = 0.0;
  EXPECT_THROW(c.validate(), InvalidParameter);
  c = {};
  c.dt = -1.0;
  EXPECT_THROW(c.validate(), InvalidParameter);
  c = {};
  c.fFloor = 0.0;
  EXPECT_THROW(c.validate(), InvalidParameter);
}

TEST(Dynamics, BackwardEulerDiffusionMatchesHeatOracle) {
  // Gaussian bump, flat at the wall and negligible at the top
  const Grid g = build_grid(4, 256, 10.0, 1.0, 2.0);
  const Field f0 = g.sample([](double, double y) { return std::exp(-y * y); });
  const double dt = 1e-5, tEnd = 0.01;
  const DiffusionSolver solver(g, dt, DiffusionScheme::BackwardEuler);
  Field f = f0;
  for (int n = 0; n < 1000; ++n) f = solver.apply(f);
  const auto ref = refined_oracle([](double y) { return std::exp(-y * y); }, g, dt, tEnd, 16);
  EXPECT_LT(max_diff(column(f), ref), 1e-6);
  EXPECT_LT(max_diff(column(f, 0), column(f, 3)), 1e-15);
}

TEST(Dynamics, ImplicitDiffusionKeepsNeumannRow) {
  const Grid g = build_grid(4, 128, 10.0, 1.0, 2.0);
  const Field f0 = g.sample([](double x, double y) { return (2.0 + std::cos(x)) * std::exp(-y * y); });
  const Field f = implicit_diffusion_f(f0, 1e-2, g);
  const Field fy = dy(f, 1, g);
  for (std::size_t i = 0; i < g.nx(); ++i) EXPECT_NEAR(fy(0, i), 0.0, 1e-12);
}

TEST(Dynamics, ShearStateLeavesVelocityAlone) {
  const Grid g = build_grid(4, 512, 20.0, 1.0, 2.0);
  State s = make_initial_data({1.0, 2.0, 0.0, 0.0, 0}, g);
  SolverConfig c;
  c.dt = 1e-3;
  c.tEnd = 0.02;
  const State e = advance(s, c, g);
  EXPECT_NEAR(e.t, 0.02, 1e-15);
  EXPECT_EQ(e.u.maxAbs(), 0.0);
  EXPECT_EQ(e.v.maxAbs(), 0.0);
  EXPECT_LT(e.g.maxAbs(), 1e-15);
  const auto ref = refined_oracle([](double y) { return 1.0 / (1.0 + y * y); }, g, 1e-4, 0.02, 16);
  EXPECT_LT(max_diff(column(e.f), ref), 1e-5);
}

TEST(Dynamics, MmsOperatorsConsistentWithSources) {
  for (double t : {0.0, 0.3}) {
    const auto [eu1, ef1] = mms_residual(128, t);
    const auto [eu2, ef2] = mms_residual(256, t);
    EXPECT_GT(std::log2(eu1 / eu2), 2.0) << "t=" << t;
    EXPECT_GT(std::log2(ef1 / ef2), 2.0) << "t=" << t;
    EXPECT_LT(std::max(eu2, ef2), 1e-3);
  }
}

TEST(Dynamics, StepHonoursCflAndFloor) {
  const Grid g = build_grid(16, 64, 8.0, 1.0, 2.0);
  const State s = make_initial_data({}, g);
  SolverConfig c;
  c.dt = 10.0;
  const State n = step(s, c, g);
  EXPECT_NEAR(n.t, cfl_limit(s, g, c.cfl), 1e-15);
  c = {};
  c.fFloor = 0.95;  // initial minimum of f <y>^2 is 0.9
  EXPECT_THROW(step(s, c, g), PositivityLost);
}

TEST(Dynamics, ReconstructionAfterStep) {
  const Grid g = build_grid(16, 128, 8.0, 1.0, 2.0);
  SolverConfig c;
  c.tEnd = 0.01;
  const State e = advance(make_initial_data({}, g), c, g);
  const auto [v, gg] = reconstruct(e.u, e.f, g);
  EXPECT_EQ(maxAbsDiff(v, e.v), 0.0);
  EXPECT_EQ(maxAbsDiff(gg, e.g), 0.0);
  EXPECT_TRUE(e.u.allFinite() && e.f.allFinite());
}
