#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "mhdbl/errors.hpp"

extern "C" {
void dgbtrf_(const int* m, const int* n, const int* kl, const int* ku, double* ab, const int* ldab,
             int* ipiv, int* info);
void dgbtrs_(const char* trans, const int* n, const int* kl, const int* ku, const int* nrhs,
             const double* ab, const int* ldab, const int* ipiv, double* b, const int* ldb,
             int* info);
}

namespace mhdbl {

/// Square banded matrix with partial-pivoting LU through LAPACK's dgbtrf/dgbtrs.
class BandedMatrix {
public:
  BandedMatrix(std::size_t n, int kl, int ku)
      : n_(static_cast<int>(n)), kl_(kl), ku_(ku), ldab_(2 * kl + ku + 1),
        ab_(static_cast<std::size_t>(ldab_) * n, 0.0) {}

  std::size_t size() const noexcept { return static_cast<std::size_t>(n_); }

  /// A(i, j) = value; (i, j) must lie inside the band.
  void set(std::size_t i, std::size_t j, double value) { at(i, j) = value; }
  void add(std::size_t i, std::size_t j, double value) { at(i, j) += value; }

  void factorize() {
    ipiv_.assign(static_cast<std::size_t>(n_), 0);
    int info = 0;
    dgbtrf_(&n_, &n_, &kl_, &ku_, ab_.data(), &ldab_, ipiv_.data(), &info);
    if (info != 0) throw SingularSolve("banded LU failed, info=" + std::to_string(info));
    factored_ = true;
  }

  /// Solve in place for nrhs right-hand sides stored column-major (each of length n).
  void solve(std::vector<double>& rhs, std::size_t nrhs) const {
    if (!factored_) throw SingularSolve("banded matrix used before factorisation");
    const char trans = 'N';
    const int nr = static_cast<int>(nrhs);
    int info = 0;
    dgbtrs_(&trans, &n_, &kl_, &ku_, &nr, ab_.data(), &ldab_, ipiv_.data(), rhs.data(), &n_,
            &info);
    if (info != 0) throw SingularSolve("banded solve failed, info=" + std::to_string(info));
  }

private:
  double& at(std::size_t i, std::size_t j) {
    const long row = static_cast<long>(kl_ + ku_) + static_cast<long>(i) - static_cast<long>(j);
    if (row < kl_ || row >= ldab_) throw SingularSolve("entry outside the band");
    return ab_[static_cast<std::size_t>(row) + j * static_cast<std::size_t>(ldab_)];
  }

  int n_, kl_, ku_, ldab_;
  std::vector<double> ab_;
  std::vector<int> ipiv_;
  bool factored_ = false;
};

}  // namespace mhdbl
