#pragma once

#include <algorithm>
#include <cassert>
#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

namespace mhdbl {

/// Real samples on the (Ny+1) x Nx product grid.
///
/// Storage is row-major with one row per normal level y_j, so a row is a
/// contiguous periodic x-line: sample (j, i) lives at data[j * nx + i].
class Field {
public:
  Field() = default;
  Field(std::size_t rows, std::size_t nx, double value = 0.0)
      : rows_(rows), nx_(nx), data_(rows * nx, value) {}

  std::size_t rows() const noexcept { return rows_; }
  std::size_t nx() const noexcept { return nx_; }
  std::size_t size() const noexcept { return data_.size(); }

  double& operator()(std::size_t j, std::size_t i) noexcept { return data_[j * nx_ + i]; }
  double operator()(std::size_t j, std::size_t i) const noexcept { return data_[j * nx_ + i]; }

  std::span<double> row(std::size_t j) noexcept { return {data_.data() + j * nx_, nx_}; }
  std::span<const double> row(std::size_t j) const noexcept {
    return {data_.data() + j * nx_, nx_};
  }

  std::vector<double>& data() noexcept { return data_; }
  const std::vector<double>& data() const noexcept { return data_; }

  bool sameShape(const Field& other) const noexcept {
    return rows_ == other.rows_ && nx_ == other.nx_;
  }

  Field& operator+=(const Field& o) {
    assert(sameShape(o));
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += o.data_[k];
    return *this;
  }
  Field& operator-=(const Field& o) {
    assert(sameShape(o));
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= o.data_[k];
    return *this;
  }
  Field& operator*=(double s) {
    for (double& x : data_) x *= s;
    return *this;
  }

  /// this += s * o
  Field& axpy(double s, const Field& o) {
    assert(sameShape(o));
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += s * o.data_[k];
    return *this;
  }

  double maxAbs() const noexcept {
    double m = 0.0;
    for (double x : data_) m = std::max(m, std::abs(x));
    return m;
  }

  bool allFinite() const noexcept {
    return std::all_of(data_.begin(), data_.end(), [](double x) { return std::isfinite(x); });
  }

private:
  std::size_t rows_ = 0;
  std::size_t nx_ = 0;
  std::vector<double> data_;
};

inline Field operator+(Field a, const Field& b) { return a += b; }
inline Field operator-(Field a, const Field& b) { return a -= b; }
inline Field operator*(double s, Field a) { return a *= s; }
inline Field operator*(Field a, double s) { return a *= s; }

/// Pointwise product (no dealiasing; see spectral.hpp for the 2/3-rule version).
inline Field hadamard(const Field& a, const Field& b) {
  assert(a.sameShape(b));
  Field out(a.rows(), a.nx());
  for (std::size_t k = 0; k < a.size(); ++k) out.data()[k] = a.data()[k] * b.data()[k];
  return out;
}

/// Pointwise quotient a / b.
inline Field quotient(const Field& a, const Field& b) {
  assert(a.sameShape(b));
  Field out(a.rows(), a.nx());
  for (std::size_t k = 0; k < a.size(); ++k) out.data()[k] = a.data()[k] / b.data()[k];
  return out;
}

inline double maxAbsDiff(const Field& a, const Field& b) {
  assert(a.sameShape(b));
  double m = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k)
    m = std::max(m, std::abs(a.data()[k] - b.data()[k]));
  return m;
}

}  // namespace mhdbl
