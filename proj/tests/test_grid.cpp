#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "mhdbl/grid.hpp"
#include "mhdbl/stencil.hpp"

using namespace mhdbl;

namespace {

double max_err_dy_exp(std::size_t ny, int order) {
  const Grid g = build_grid(4, ny, 8.0, 1.0, 2.0);
  const Field f = g.sample([](double, double y) { return std::exp(-y); });
  const Field d = dy(f, order, g);
  const double sign = order % 2 ? -1.0 : 1.0;
  double e = 0.0;
  for (std::size_t j = 0; j < g.rows(); ++j)
    e = std::max(e, std::abs(d(j, 0) - sign * std::exp(-g.yNodes()[j])));
  return e;
}

}  // namespace

TEST(Grid, RejectsBadParameters) {
  EXPECT_THROW(build_grid(6, 64, 8.0, 1.0, 2.0), InvalidParameter);
  EXPECT_THROW(build_grid(8, 8, 8.0, 1.0, 2.0), InvalidParameter);
  EXPECT_THROW(build_grid(8, 64, -1.0, 1.0, 2.0), InvalidParameter);
  EXPECT_THROW(build_grid(8, 64, 8.0, 0.4, 2.0), InvalidParameter);
  EXPECT_THROW(build_grid(8, 64, 8.0, 1.0, 1.5), InvalidParameter);
  try {
    build_grid(8, 64, 8.0, 0.4, 2.0);
  } catch (const InvalidParameter& e) {
    EXPECT_EQ(e.name(), "ell");
  }
}

TEST(Grid, NodesAndWeights) {
  const Grid g = build_grid(8, 32, 4.0, 1.0, 2.0);
  EXPECT_EQ(g.rows(), 33u);
  EXPECT_DOUBLE_EQ(g.yNodes().back(), 4.0);
  EXPECT_DOUBLE_EQ(g.xNodes()[1], 2.0 * std::numbers::pi / 8.0);
  double total = 0.0;
  for (double w : g.quadWeights()) total += w;
  EXPECT_NEAR(total, 4.0, 1e-14);
}

TEST(Stencil, ExactOnPolynomials) {
  // a 4th-order row differentiates quartics exactly, one-sided rows included
  for (int m = 1; m <= 4; ++m) {
    const auto rows = derivative_rows(20, 0.1, m);
    for (std::size_t j : {0u, 1u, 10u, 19u, 20u}) {
      const StencilRow& r = rows[j];
      double got = 0.0;
      for (std::size_t k = 0; k < r.weights.size(); ++k) {
        const double y = 0.1 * double(r.start + k);
        got += r.weights[k] * std::pow(y, 4);
      }
      const double y = 0.1 * double(j);
      const double want = m == 1 ? 4 * y * y * y : m == 2 ? 12 * y * y : m == 3 ? 24 * y : 24.0;
      EXPECT_NEAR(got, want, 1e-8 * (1.0 + std::abs(want))) << "m=" << m << " j=" << j;
    }
  }
}

TEST(Grid, DyFourthOrderOnExponential) {
  for (int order : {1, 2}) {
    const double ratio = max_err_dy_exp(64, order) / max_err_dy_exp(128, order);
    EXPECT_GT(ratio, 12.0) << "order " << order;
    EXPECT_LT(ratio, 24.0) << "order " << order;
  }
}

TEST(Grid, AntiderivativeOfExponential) {
  for (auto rule : {Antiderivative::Trapezoid, Antiderivative::EndCorrected}) {
    double prev = 0.0;
    for (std::size_t ny : {64u, 128u}) {
      const Grid g = build_grid(4, ny, 8.0, 1.0, 2.0);
      const Field F = integrate_y_from_0(g.sample([](double, double y) { return std::exp(-y); }), g,
                                         rule);
      double e = 0.0;
      for (std::size_t j = 0; j < g.rows(); ++j)
        e = std::max(e, std::abs(F(j, 2) - (1.0 - std::exp(-g.yNodes()[j]))));
      EXPECT_EQ(F(0, 0), 0.0);
      EXPECT_LT(e, g.hy() * g.hy());
      if (prev > 0.0) {
        EXPECT_GT(prev / e, rule == Antiderivative::Trapezoid ? 3.5 : 12.0);
      }
      prev = e;
    }
  }
}

TEST(Grid, WeightedNormAgainstQuadrature) {
  // ||<y> sin x e^-y||^2 = pi int_0^Y (1+y^2) e^-2y dy
  const double Y = 20.0;
  const auto exact = [&] {
    const auto F = [](double y) { return -std::exp(-2 * y) * (2 * y * y + 2 * y + 3) / 4; };
    return std::numbers::pi * (F(Y) - F(0.0));
  }();
  const Grid g = build_grid(8, 2048, Y, 1.0, 2.0);
  const Field f = g.sample([](double x, double y) { return std::sin(x) * std::exp(-y); });
  const double n = weighted_l2(f, 1.0, g);
  // trapezoid in y: O(h^2)
  EXPECT_NEAR(n * n, exact, g.hy() * g.hy() * exact);
}
