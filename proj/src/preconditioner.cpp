#include "gksplit/preconditioner.hpp"

#include <fftw3.h>

#include "fftw_lock.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace gksplit {

namespace {
constexpr std::ptrdiff_t kMaxBand = 2;  // radial and angular reach of the widest bracket stencil
}  // namespace

namespace detail {
std::mutex& fftw_planner_mutex() {
  static std::mutex m;
  return m;
}
}  // namespace detail

ThetaCirculantPreconditioner::ThetaCirculantPreconditioner(std::size_t nr, std::size_t ntheta)
    : nr_(nr), nt_(ntheta), nm_(ntheta / 2 + 1), real_buf_(nr * ntheta), spec_buf_(nr * (ntheta / 2 + 1)) {
  const int n = static_cast<int>(nt_);
  const int howmany = static_cast<int>(nr_);
  auto* spec = reinterpret_cast<fftw_complex*>(spec_buf_.data());
  std::lock_guard<std::mutex> lock(detail::fftw_planner_mutex());
  forward_ = fftw_plan_many_dft_r2c(1, &n, howmany, real_buf_.data(), nullptr, 1, n, spec, nullptr, 1,
                                    static_cast<int>(nm_), FFTW_ESTIMATE);
  backward_ = fftw_plan_many_dft_c2r(1, &n, howmany, spec, nullptr, 1, static_cast<int>(nm_),
                                     real_buf_.data(), nullptr, 1, n, FFTW_ESTIMATE);
  if (!forward_ || !backward_) throw std::runtime_error("preconditioner: FFTW planning failed");
}

ThetaCirculantPreconditioner::~ThetaCirculantPreconditioner() {
  std::lock_guard<std::mutex> lock(detail::fftw_planner_mutex());
  if (forward_) fftw_destroy_plan(static_cast<fftw_plan>(forward_));
  if (backward_) fftw_destroy_plan(static_cast<fftw_plan>(backward_));
}

void ThetaCirculantPreconditioner::rebuild(const CsrMatrix& m, double h) {
  if (m.rows() != nr_ * nt_) throw std::invalid_argument("preconditioner: matrix size mismatch");
  // averaged coefficient per (row i, radial offset, angular offset); both
  // offsets lie in [-kMaxBand, kMaxBand] for the bracket stencils
  constexpr std::ptrdiff_t span = 2 * kMaxBand + 1;
  std::vector<double> avg(nr_ * span * span, 0.0);
  const auto rp = m.row_ptr();
  const auto ci = m.col_idx();
  const auto val = m.values();
  const auto nt = static_cast<std::ptrdiff_t>(nt_);
  const double inv_nt = 1.0 / static_cast<double>(nt_);
  std::ptrdiff_t bw = 0;
  for (std::size_t row = 0; row < m.rows(); ++row) {
    const auto i = static_cast<std::ptrdiff_t>(row / nt_), j = static_cast<std::ptrdiff_t>(row % nt_);
    for (std::size_t k = rp[row]; k < rp[row + 1]; ++k) {
      const auto ic = static_cast<std::ptrdiff_t>(ci[k] / nt_), jc = static_cast<std::ptrdiff_t>(ci[k] % nt_);
      const std::ptrdiff_t di = ic - i;
      // entries wrapping around a periodic radial direction are left out:
      // they would destroy the band structure
      if (std::abs(di) > kMaxBand) continue;
      std::ptrdiff_t dj = ((jc - j) % nt + nt) % nt;
      if (dj > nt / 2) dj -= nt;
      if (std::abs(dj) > kMaxBand) continue;
      bw = std::max(bw, std::abs(di));
      avg[(static_cast<std::size_t>(i) * span + static_cast<std::size_t>(di + kMaxBand)) * span +
          static_cast<std::size_t>(dj + kMaxBand)] += val[k] * inv_nt;
    }
  }
  bw_ = static_cast<std::size_t>(bw);
  const std::size_t w = 2 * bw_ + 1;
  bands_.assign(nm_ * nr_ * w, cplx(0.0, 0.0));
  auto band = [&](std::size_t mode, std::size_t i, std::ptrdiff_t di) -> cplx& {
    return bands_[(mode * nr_ + i) * w + static_cast<std::size_t>(di + bw)];
  };
  // e^{2 pi i mode dj / n} for dj in [-kMaxBand, kMaxBand]
  std::vector<cplx> phase(nm_ * span);
  for (std::size_t mode = 0; mode < nm_; ++mode)
    for (std::ptrdiff_t dj = -kMaxBand; dj <= kMaxBand; ++dj) {
      const double ang = 2.0 * std::numbers::pi * static_cast<double>(mode) * static_cast<double>(dj) * inv_nt;
      phase[mode * span + static_cast<std::size_t>(dj + kMaxBand)] = cplx(std::cos(ang), std::sin(ang));
    }
  for (std::size_t mode = 0; mode < nm_; ++mode)
    for (std::size_t i = 0; i < nr_; ++i) {
      band(mode, i, 0) = 1.0;
      for (std::ptrdiff_t di = -bw; di <= bw; ++di) {
        cplx s(0.0, 0.0);
        for (std::ptrdiff_t dj = -kMaxBand; dj <= kMaxBand; ++dj)
          s += avg[(i * span + static_cast<std::size_t>(di + kMaxBand)) * span + static_cast<std::size_t>(dj + kMaxBand)] *
               phase[mode * span + static_cast<std::size_t>(dj + kMaxBand)];
        band(mode, i, di) += h * s;
      }
    }
  // banded LU without pivoting; I + h M has a positive definite Hermitian part
  // when M is skew, which keeps the pivots away from zero
  for (std::size_t mode = 0; mode < nm_; ++mode)
    for (std::size_t k = 0; k < nr_; ++k) {
      const cplx piv = band(mode, k, 0);
      if (std::abs(piv) < 1e-300) throw std::runtime_error("preconditioner: zero pivot");
      for (std::size_t i = k + 1; i <= std::min(nr_ - 1, k + bw_); ++i) {
        const auto dik = static_cast<std::ptrdiff_t>(k) - static_cast<std::ptrdiff_t>(i);
        const cplx l = band(mode, i, dik) / piv;
        band(mode, i, dik) = l;
        for (std::size_t j = k + 1; j <= std::min(nr_ - 1, k + bw_); ++j) {
          const auto dij = static_cast<std::ptrdiff_t>(j) - static_cast<std::ptrdiff_t>(i);
          const auto dkj = static_cast<std::ptrdiff_t>(j) - static_cast<std::ptrdiff_t>(k);
          band(mode, i, dij) -= l * band(mode, k, dkj);
        }
      }
    }
}

void ThetaCirculantPreconditioner::apply(std::span<const double> x, std::span<double> y) {
  std::copy(x.begin(), x.end(), real_buf_.begin());
  fftw_execute(static_cast<fftw_plan>(forward_));
  const std::size_t w = 2 * bw_ + 1;
  const auto bw = static_cast<std::ptrdiff_t>(bw_);
  for (std::size_t mode = 0; mode < nm_; ++mode) {
    auto rhs = [&](std::size_t i) -> cplx& { return spec_buf_[i * nm_ + mode]; };
    auto band = [&](std::size_t i, std::ptrdiff_t di) -> const cplx& {
      return bands_[(mode * nr_ + i) * w + static_cast<std::size_t>(di + bw)];
    };
    for (std::size_t i = 1; i < nr_; ++i)
      for (std::size_t k = i > bw_ ? i - bw_ : 0; k < i; ++k)
        rhs(i) -= band(i, static_cast<std::ptrdiff_t>(k) - static_cast<std::ptrdiff_t>(i)) * rhs(k);
    for (std::size_t i = nr_; i-- > 0;) {
      for (std::size_t j = i + 1; j <= std::min(nr_ - 1, i + bw_); ++j)
        rhs(i) -= band(i, static_cast<std::ptrdiff_t>(j) - static_cast<std::ptrdiff_t>(i)) * rhs(j);
      rhs(i) /= band(i, 0);
    }
  }
  fftw_execute(static_cast<fftw_plan>(backward_));
  const double scale = 1.0 / static_cast<double>(nt_);
  for (std::size_t k = 0; k < y.size(); ++k) y[k] = real_buf_[k] * scale;
}

}  // namespace gksplit
