#include <gtest/gtest.h>

#include <cmath>
#include <complex>
#include <random>

#include "mhdbl/grid.hpp"
#include "mhdbl/spectral.hpp"

using namespace mhdbl;

namespace {

std::vector<double> line(std::size_t n, auto fn) {
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = fn(2.0 * std::numbers::pi * double(i) / double(n));
  return out;
}

}  // namespace

TEST(Spectral, DerivativesOfTrigIdentity) {
  const auto s = line(32, [](double x) { return std::sin(3 * x) + 0.5 * std::cos(x); });
  const auto d1 = dx_line(s, 1);
  const auto d3 = dx_line(s, 3);
  for (std::size_t i = 0; i < s.size(); ++i) {
    const double x = 2.0 * std::numbers::pi * double(i) / 32.0;
    EXPECT_NEAR(d1[i], 3 * std::cos(3 * x) - 0.5 * std::sin(x), 1e-13);
    EXPECT_NEAR(d3[i], -27 * std::cos(3 * x) + 0.5 * std::sin(x), 1e-11);
  }
}

TEST(Spectral, MultipliersOnSingleModes) {
  const auto s = line(16, [](double x) { return std::cos(2 * x) + 4.0; });
  const auto lam = lambda_sigma_line(s, 1.0);
  const auto abs = abs_dx_sigma_line(s, 0.5);
  for (std::size_t i = 0; i < s.size(); ++i) {
    const double x = 2.0 * std::numbers::pi * double(i) / 16.0;
    EXPECT_NEAR(lam[i], std::sqrt(5.0) * std::cos(2 * x) + 4.0, 1e-13);
    EXPECT_NEAR(abs[i], std::sqrt(2.0) * std::cos(2 * x), 1e-13);
  }
  EXPECT_THROW(abs_dx_sigma_line(s, 0.0), InvalidParameter);
}

TEST(Spectral, CommutatorTwoModeAlgebra) {
  // rho = cos x, w = cos 3x: rho w = (cos 2x + cos 4x)/2 and rho |D|^s w = 3^s rho w, so
  // [|D|^s, rho] w = ((2^s - 3^s) cos 2x + (4^s - 3^s) cos 4x) / 2.
  const double s = 0.5;
  const auto rho = line(64, [](double x) { return std::cos(x); });
  const auto w = line(64, [](double x) { return std::cos(3 * x); });
  const auto c = commutator_multiplier(rho, w, s);
  for (std::size_t i = 0; i < c.size(); ++i) {
    const double x = 2.0 * std::numbers::pi * double(i) / 64.0;
    const double want = 0.5 * ((std::pow(2, s) - std::pow(3, s)) * std::cos(2 * x) +
                               (std::pow(4, s) - std::pow(3, s)) * std::cos(4 * x));
    EXPECT_NEAR(c[i], want, 1e-13);
  }
  EXPECT_THROW(commutator_multiplier(rho, w, 1.0), InvalidParameter);
}

TEST(Spectral, DealiasedProductMatchesConvolution) {
  // inputs fill the kept band |k| <= N/3; the product reaches 2N/3, whose aliases
  // land outside the band, so the kept modes equal the exact convolution
  const Grid g = build_grid(32, 16, 1.0, 1.0, 2.0);
  const int kc = dealias_cutoff(g.nx());
  std::mt19937_64 rng(7);
  std::normal_distribution<double> normal;
  std::vector<std::complex<double>> a(kc + 1), b(kc + 1);
  for (int k = 0; k <= kc; ++k) {
    a[k] = {normal(rng), k ? normal(rng) : 0.0};
    b[k] = {normal(rng), k ? normal(rng) : 0.0};
  }
  const auto coef = [](const std::vector<std::complex<double>>& c, int k) {
    return k >= 0 ? c[k] : std::conj(c[-k]);
  };
  const auto eval = [&](const std::vector<std::complex<double>>& c, double x) {
    double v = c[0].real();
    for (int k = 1; k <= kc; ++k) v += 2.0 * (c[k] * std::polar(1.0, k * x)).real();
    return v;
  };
  const Field A = g.sample([&](double x, double) { return eval(a, x); });
  const Field B = g.sample([&](double x, double) { return eval(b, x); });
  const Field P = dealiased_product(A, B);
  for (std::size_t i = 0; i < g.nx(); ++i) {
    const double x = g.xNodes()[i];
    std::complex<double> sum = 0.0;
    for (int k = -kc; k <= kc; ++k)
      for (int p = -kc; p <= kc; ++p) {
        const int q = k - p;
        if (q < -kc || q > kc) continue;
        sum += coef(a, p) * coef(b, q) * std::polar(1.0, k * x);
      }
    EXPECT_NEAR(P(3, i), sum.real(), 1e-11);
  }
}
