#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "gksplit/sparse.hpp"

namespace gksplit {

/// Approximate inverse of (I + h M) for an operator on an (n_r x n_theta)
/// grid that is periodic in theta. M is replaced by its theta-average
/// (entries with equal radial and angular offsets averaged over j), which is
/// circulant in theta. Each Fourier mode then needs one banded solve in r.
/// Exact when M itself is theta-invariant (e.g. a potential depending on r only)
/// and has no radial wrap-around entries.
class ThetaCirculantPreconditioner {
public:
  ThetaCirculantPreconditioner(std::size_t nr, std::size_t ntheta);
  ~ThetaCirculantPreconditioner();
  ThetaCirculantPreconditioner(const ThetaCirculantPreconditioner&) = delete;
  ThetaCirculantPreconditioner& operator=(const ThetaCirculantPreconditioner&) = delete;

  /// Refactor for a new matrix (same grid) and shift h.
  void rebuild(const CsrMatrix& m, double h);
  /// y = P^{-1} x
  void apply(std::span<const double> x, std::span<double> y);

  std::size_t nr() const { return nr_; }
  std::size_t ntheta() const { return nt_; }

private:
  using cplx = std::complex<double>;
  std::size_t nr_, nt_, nm_;
  std::size_t bw_ = 0;             // radial half bandwidth
  std::vector<cplx> bands_;        // per mode: nr rows x (2 bw + 1), LU in place
  std::vector<double> real_buf_;
  std::vector<cplx> spec_buf_;
  void* forward_ = nullptr;        // fftw_plan
  void* backward_ = nullptr;
};

}  // namespace gksplit
