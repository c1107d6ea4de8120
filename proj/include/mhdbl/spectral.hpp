#pragma once

#include <fftw3.h>

#include <cmath>
#include <complex>
#include <cstddef>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <span>
#include <vector>

#include "mhdbl/errors.hpp"
#include "mhdbl/field.hpp"

namespace mhdbl {

using cplx = std::complex<double>;

// Transform convention, used everywhere in the library:
//   (F w)(k) = sum_i w(x_i) exp(-i k x_i) * (2 pi / Nx),   x_i = 2 pi i / Nx
//   w(x_i)   = (1 / 2 pi) sum_k (F w)(k) exp(i k x_i)
// so that sum_i |w_i|^2 (2 pi / Nx) = (1 / 2 pi) sum_k |(F w)(k)|^2.

namespace detail {

class FftPlan {
public:
  explicit FftPlan(std::size_t n) : n_(n) {
    std::vector<double> r(n);
    std::vector<fftw_complex> c(n / 2 + 1);
    const int ni = static_cast<int>(n);
    forward_ = fftw_plan_dft_r2c_1d(ni, r.data(), c.data(), FFTW_ESTIMATE | FFTW_UNALIGNED);
    backward_ = fftw_plan_dft_c2r_1d(ni, c.data(), r.data(), FFTW_ESTIMATE | FFTW_UNALIGNED);
  }
  ~FftPlan() {
    fftw_destroy_plan(forward_);
    fftw_destroy_plan(backward_);
  }
  FftPlan(const FftPlan&) = delete;
  FftPlan& operator=(const FftPlan&) = delete;

  /// Half spectrum (k = 0..n/2) of a real line, in the library convention.
  void forward(const double* in, cplx* out) const {
    fftw_execute_dft_r2c(forward_, const_cast<double*>(in), reinterpret_cast<fftw_complex*>(out));
    const double scale = 2.0 * std::numbers::pi / static_cast<double>(n_);
    for (std::size_t k = 0; k <= n_ / 2; ++k) out[k] *= scale;
  }

  /// Inverse of forward(); `in` is used as scratch and overwritten.
  void backward(cplx* in, double* out) const {
    fftw_execute_dft_c2r(backward_, reinterpret_cast<fftw_complex*>(in), out);
    const double scale = 1.0 / (2.0 * std::numbers::pi);
    for (std::size_t i = 0; i < n_; ++i) out[i] *= scale;
  }

  std::size_t size() const noexcept { return n_; }

private:
  std::size_t n_;
  fftw_plan forward_ = nullptr;
  fftw_plan backward_ = nullptr;
};

// FFTW planning is not thread-safe; execution on fresh arrays is.
inline const FftPlan& plan_for(std::size_t n) {
  static std::mutex mu;
  static std::map<std::size_t, std::unique_ptr<FftPlan>> plans;
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = plans[n];
  if (!slot) slot = std::make_unique<FftPlan>(n);
  return *slot;
}

}  // namespace detail

/// Signed wavenumber of FFT-ordered index idx on n points.
inline int wavenumber(std::size_t idx, std::size_t n) {
  const auto i = static_cast<long>(idx);
  const auto ni = static_cast<long>(n);
  return static_cast<int>(i <= ni / 2 ? i : i - ni);
}

/// Fourier coefficients of one real periodic sample line, in FFT order
/// (k = 0, 1, ..., Nx/2, -Nx/2+1, ..., -1).
struct SpectralLine {
  std::vector<cplx> coefficients;
};

inline SpectralLine forward(std::span<const double> line) {
  const std::size_t n = line.size();
  std::vector<cplx> half(n / 2 + 1);
  detail::plan_for(n).forward(line.data(), half.data());
  SpectralLine s;
  s.coefficients.resize(n);
  for (std::size_t k = 0; k <= n / 2; ++k) s.coefficients[k] = half[k];
  for (std::size_t k = n / 2 + 1; k < n; ++k) s.coefficients[k] = std::conj(half[n - k]);
  return s;
}

/// Real line from its coefficients (the Hermitian half is what is used).
inline std::vector<double> inverse(const SpectralLine& s) {
  const std::size_t n = s.coefficients.size();
  std::vector<cplx> half(s.coefficients.begin(), s.coefficients.begin() + n / 2 + 1);
  std::vector<double> out(n);
  detail::plan_for(n).backward(half.data(), out.data());
  return out;
}

/// Apply a real-preserving Fourier multiplier to one line. `symbol(k)` is
/// evaluated for k = 0..Nx/2; only its real part is used at the Nyquist mode
/// (so odd derivatives annihilate it).
template <class Symbol>
std::vector<double> apply_multiplier_line(std::span<const double> line, Symbol&& symbol) {
  const std::size_t n = line.size();
  const auto& plan = detail::plan_for(n);
  std::vector<cplx> half(n / 2 + 1);
  plan.forward(line.data(), half.data());
  for (std::size_t k = 0; k <= n / 2; ++k) {
    cplx s = symbol(static_cast<int>(k));
    if (k == n / 2) s = cplx(s.real(), 0.0);
    half[k] *= s;
  }
  std::vector<double> out(n);
  plan.backward(half.data(), out.data());
  return out;
}

/// Row-by-row Fourier multiplier on a field.
template <class Symbol>
Field apply_multiplier(const Field& field, Symbol&& symbol) {
  const std::size_t n = field.nx();
  const auto& plan = detail::plan_for(n);
  std::vector<cplx> factors(n / 2 + 1);
  for (std::size_t k = 0; k <= n / 2; ++k) {
    factors[k] = symbol(static_cast<int>(k));
    if (k == n / 2) factors[k] = cplx(factors[k].real(), 0.0);
  }
  Field out(field.rows(), n);
  std::vector<cplx> half(n / 2 + 1);
  for (std::size_t j = 0; j < field.rows(); ++j) {
    plan.forward(field.row(j).data(), half.data());
    for (std::size_t k = 0; k <= n / 2; ++k) half[k] *= factors[k];
    plan.backward(half.data(), out.row(j).data());
  }
  return out;
}

/// Spectral d^order/dx^order (multiplier (ik)^order).
inline Field dx(const Field& field, int order) {
  if (order < 0) throw InvalidParameter("order", "tangential derivative order must be >= 0");
  if (order == 0) return field;
  return apply_multiplier(field, [order](int k) { return std::pow(cplx(0.0, k), order); });
}

inline std::vector<double> dx_line(std::span<const double> line, int order) {
  return apply_multiplier_line(line, [order](int k) { return std::pow(cplx(0.0, k), order); });
}

/// Lambda_x^sigma: multiplier (1 + k^2)^(sigma/2).
inline Field lambda_sigma(const Field& field, double sigma) {
  return apply_multiplier(field, [sigma](int k) {
    return cplx(std::pow(1.0 + static_cast<double>(k) * k, 0.5 * sigma), 0.0);
  });
}

inline std::vector<double> lambda_sigma_line(std::span<const double> line, double sigma) {
  return apply_multiplier_line(line, [sigma](int k) {
    return cplx(std::pow(1.0 + static_cast<double>(k) * k, 0.5 * sigma), 0.0);
  });
}

namespace detail {
inline auto abs_symbol(double sigma) {
  if (!(sigma > 0.0)) throw InvalidParameter("sigma", "|D_x|^sigma requires sigma > 0");
  return [sigma](int k) { return cplx(k == 0 ? 0.0 : std::pow(std::abs(double(k)), sigma), 0.0); };
}
}  // namespace detail

/// |D_x|^sigma: multiplier |k|^sigma; annihilates the mean.
inline Field abs_dx_sigma(const Field& field, double sigma) {
  return apply_multiplier(field, detail::abs_symbol(sigma));
}

inline std::vector<double> abs_dx_sigma_line(std::span<const double> line, double sigma) {
  return apply_multiplier_line(line, detail::abs_symbol(sigma));
}

/// [|D_x|^sigma, rho] w = |D_x|^sigma(rho w) - rho |D_x|^sigma w, 0 < sigma < 1.
inline std::vector<double> commutator_multiplier(std::span<const double> rho,
                                                 std::span<const double> w, double sigma) {
  if (!(sigma > 0.0 && sigma < 1.0))
    throw InvalidParameter("sigma", "commutator check requires 0 < sigma < 1");
  if (rho.size() != w.size()) throw InvalidParameter("rho", "rows must share the same nodes");
  std::vector<double> rw(w.size());
  for (std::size_t i = 0; i < w.size(); ++i) rw[i] = rho[i] * w[i];
  std::vector<double> out = abs_dx_sigma_line(rw, sigma);
  const std::vector<double> dw = abs_dx_sigma_line(w, sigma);
  for (std::size_t i = 0; i < w.size(); ++i) out[i] -= rho[i] * dw[i];
  return out;
}

/// Highest wavenumber kept by the 2/3 rule.
inline int dealias_cutoff(std::size_t nx) { return static_cast<int>(nx / 3); }

/// Zero every mode with |k| > kmax.
inline Field truncate_modes(const Field& field, int kmax) {
  return apply_multiplier(field, [kmax](int k) { return cplx(k <= kmax ? 1.0 : 0.0, 0.0); });
}

/// Product with the 2/3 rule applied to both inputs and to the output.
inline Field dealiased_product(const Field& a, const Field& b) {
  const int kc = dealias_cutoff(a.nx());
  const Field at = truncate_modes(a, kc);
  const Field bt = truncate_modes(b, kc);
  return truncate_modes(hadamard(at, bt), kc);
}

}  // namespace mhdbl
