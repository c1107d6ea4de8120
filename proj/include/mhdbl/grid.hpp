#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <memory>
#include <numbers>
#include <string>
#include <vector>

#include "mhdbl/errors.hpp"
#include "mhdbl/field.hpp"
#include "mhdbl/stencil.hpp"

namespace mhdbl {

inline constexpr int kMaxDyOrder = 5;

/// Discretisation of T x [0, Ymax]: uniform periodic x-nodes, uniform y-nodes
/// with y_0 = 0 and y_Ny = Ymax, trapezoidal weights in y, and the weight
/// exponents (ell, delta) that the norms and the envelope refer to.
class Grid {
public:
  std::size_t nx() const noexcept { return nx_; }
  /// Number of normal intervals; there are ny()+1 normal nodes.
  std::size_t ny() const noexcept { return ny_; }
  std::size_t rows() const noexcept { return ny_ + 1; }
  double ymax() const noexcept { return ymax_; }
  double hy() const noexcept { return ymax_ / static_cast<double>(ny_); }
  double hx() const noexcept { return 2.0 * std::numbers::pi / static_cast<double>(nx_); }
  double ell() const noexcept { return ell_; }
  double delta() const noexcept { return delta_; }

  const std::vector<double>& xNodes() const noexcept { return x_; }
  const std::vector<double>& yNodes() const noexcept { return y_; }
  const std::vector<double>& quadWeights() const noexcept { return w_; }

  const std::vector<StencilRow>& stencil(int order) const { return (*stencils_)[order - 1]; }

  Field zeros() const { return Field(rows(), nx_); }

  /// Field with samples fn(x_i, y_j).
  template <class Fn>
  Field sample(Fn&& fn) const {
    Field out = zeros();
    for (std::size_t j = 0; j < rows(); ++j)
      for (std::size_t i = 0; i < nx_; ++i) out(j, i) = fn(x_[i], y_[j]);
    return out;
  }

  friend Grid build_grid(std::size_t, std::size_t, double, double, double);

private:
  std::size_t nx_ = 0;
  std::size_t ny_ = 0;
  double ymax_ = 0.0;
  double ell_ = 0.0;
  double delta_ = 0.0;
  std::vector<double> x_, y_, w_;
  std::shared_ptr<const std::array<std::vector<StencilRow>, kMaxDyOrder>> stencils_;
};

inline Grid build_grid(std::size_t nx, std::size_t ny, double ymax, double ell, double delta) {
  if (nx < 4 || (nx & (nx - 1)) != 0)
    throw InvalidParameter("nx", "must be a power of two >= 4");
  if (ny < 16) throw InvalidParameter("ny", "must be >= 16");
  if (!(ymax > 0.0)) throw InvalidParameter("ymax", "must be positive");
  if (!(ell > 0.5)) throw InvalidParameter("ell", "must satisfy ell > 1/2");
  if (!(delta > ell + 0.5)) throw InvalidParameter("delta", "must satisfy delta > ell + 1/2");

  Grid g;
  g.nx_ = nx;
  g.ny_ = ny;
  g.ymax_ = ymax;
  g.ell_ = ell;
  g.delta_ = delta;
  g.x_.resize(nx);
  for (std::size_t i = 0; i < nx; ++i) g.x_[i] = g.hx() * static_cast<double>(i);
  const double h = g.hy();
  g.y_.resize(ny + 1);
  for (std::size_t j = 0; j <= ny; ++j) g.y_[j] = h * static_cast<double>(j);
  g.y_[0] = 0.0;
  g.y_[ny] = ymax;
  g.w_.assign(ny + 1, h);
  g.w_.front() = g.w_.back() = 0.5 * h;

  auto tables = std::make_shared<std::array<std::vector<StencilRow>, kMaxDyOrder>>();
  // Unit-spacing weights; dy() applies h^-m.
  for (int m = 1; m <= kMaxDyOrder; ++m) (*tables)[m - 1] = derivative_rows(ny, 1.0, m);
  g.stencils_ = std::move(tables);
  return g;
}

/// <y>^sigma = (1 + y^2)^(sigma/2)
inline double weight(double y, double sigma) { return std::pow(1.0 + y * y, 0.5 * sigma); }

namespace detail {
inline void require_stencil(int order, const Grid& grid) {
  if (order < 1 || order > kMaxDyOrder)
    throw InvalidParameter("order", "normal derivative order must be in 1..5");
  if (grid.ny() < static_cast<std::size_t>(2 * order + 4))
    throw GridTooCoarse("ny=" + std::to_string(grid.ny()) + " too small for d^" +
                        std::to_string(order) + "/dy^" + std::to_string(order));
}
}  // namespace detail

/// d^order/dy^order with 4th-order stencils (one-sided near y=0 and y=Ymax).
inline Field dy(const Field& field, int order, const Grid& grid) {
  detail::require_stencil(order, grid);
  const auto& rows = grid.stencil(order);
  const std::size_t nx = field.nx();
  const double scale = std::pow(grid.hy(), -order);
  Field out(field.rows(), nx);
  for (std::size_t j = 0; j < field.rows(); ++j) {
    double* o = out.row(j).data();
    const StencilRow& r = rows[j];
    for (std::size_t k = 0; k < r.weights.size(); ++k) {
      const double wk = r.weights[k] * scale;
      const double* in = field.row(r.start + k).data();
      for (std::size_t i = 0; i < nx; ++i) o[i] += wk * in[i];
    }
  }
  return out;
}

/// The order-th normal derivative restricted to row j (e.g. a trace at y=0).
inline std::vector<double> dy_row(const Field& field, int order, std::size_t j, const Grid& grid) {
  detail::require_stencil(order, grid);
  const StencilRow& r = grid.stencil(order)[j];
  const double scale = std::pow(grid.hy(), -order);
  std::vector<double> out(field.nx(), 0.0);
  for (std::size_t k = 0; k < r.weights.size(); ++k) {
    const double wk = r.weights[k] * scale;
    const auto in = field.row(r.start + k);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += wk * in[i];
  }
  return out;
}

enum class Antiderivative {
  Trapezoid,     ///< cumulative trapezoid, 2nd order
  EndCorrected,  ///< trapezoid plus the Euler-Maclaurin end correction, 4th order
};

/// Cumulative integral from y=0 along every x-column; row 0 is exactly zero.
inline Field integrate_y_from_0(const Field& field, const Grid& grid,
                                Antiderivative rule = Antiderivative::Trapezoid) {
  const std::size_t nx = field.nx();
  const double h = grid.hy();
  Field out(field.rows(), nx);
  for (std::size_t j = 1; j < field.rows(); ++j) {
    const auto prev = out.row(j - 1);
    const auto a = field.row(j - 1);
    const auto b = field.row(j);
    auto o = out.row(j);
    for (std::size_t i = 0; i < nx; ++i) o[i] = prev[i] + 0.5 * h * (a[i] + b[i]);
  }
  if (rule == Antiderivative::EndCorrected) {
    // int_0^y F = T(y) - h^2/12 (F'(y) - F'(0)) + O(h^4)
    const Field slope = dy(field, 1, grid);
    const auto s0 = slope.row(0);
    const double c = h * h / 12.0;
    for (std::size_t j = 1; j < field.rows(); ++j) {
      auto o = out.row(j);
      const auto s = slope.row(j);
      for (std::size_t i = 0; i < nx; ++i) o[i] -= c * (s[i] - s0[i]);
    }
  }
  return out;
}

/// Discrete L^2(T x [0,Ymax]) inner product of <y>^sigma a and <y>^sigma b.
inline double weighted_inner(const Field& a, const Field& b, double sigma, const Grid& grid) {
  const auto& y = grid.yNodes();
  const auto& w = grid.quadWeights();
  double total = 0.0;
  for (std::size_t j = 0; j < a.rows(); ++j) {
    const auto ra = a.row(j);
    const auto rb = b.row(j);
    double s = 0.0;
    for (std::size_t i = 0; i < ra.size(); ++i) s += ra[i] * rb[i];
    total += w[j] * weight(y[j], 2.0 * sigma) * s;
  }
  return total * grid.hx();
}

/// ||<y>^sigma field||_{L^2}: trapezoid in y, uniform sum times 2pi/Nx in x.
inline double weighted_l2(const Field& field, double sigma, const Grid& grid) {
  return std::sqrt(weighted_inner(field, field, sigma, grid));
}

/// L^2_x norm of one periodic line.
inline double line_l2(std::span<const double> row) {
  double s = 0.0;
  for (double v : row) s += v * v;
  return std::sqrt(s * 2.0 * std::numbers::pi / static_cast<double>(row.size()));
}

}  // namespace mhdbl
