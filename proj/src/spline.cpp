#include "gksplit/spline.hpp"

#include <cmath>
#include <stdexcept>

namespace gksplit {

namespace {

// index of the cell containing x on a uniform grid, plus the local coordinate
std::size_t cell_of(const Grid1D& g, double x, double& t) {
  const double h = g.spacing();
  const std::size_t n = g.size();
  double s = (x - g.start()) / h;
  if (g.periodic()) {
    s = std::fmod(s, static_cast<double>(n));
    if (s < 0.0) s += static_cast<double>(n);
    auto i = static_cast<std::size_t>(s);
    if (i >= n) i = n - 1;  // s rounded up to n
    t = s - static_cast<double>(i);
    return i;
  }
  double fl = std::floor(s);
  if (fl < 0.0) fl = 0.0;
  if (fl > static_cast<double>(n - 2)) fl = static_cast<double>(n - 2);
  t = s - fl;
  return static_cast<std::size_t>(fl);
}

}  // namespace

Spline1D::Spline1D(const Grid1D& knots, SplineEnd end) : grid_(knots), end_(end) {
  const std::size_t n = knots.size();
  if ((end == SplineEnd::Periodic) != knots.periodic())
    throw std::invalid_argument("spline: periodic end condition needs a periodic grid and vice versa");
  y_.assign(n, 0.0);
  m_.assign(n, 0.0);
  if (end == SplineEnd::Periodic) {
    factor_ = CyclicTridiagonal(n, 1.0, 4.0, 1.0);
  } else if (end == SplineEnd::Natural) {
    const std::size_t k = n - 2;
    factor_ = TridiagonalFactor(Tridiagonal{std::vector<double>(k, 1.0), std::vector<double>(k, 4.0),
                                            std::vector<double>(k, 1.0)});
  } else {
    Tridiagonal t{std::vector<double>(n, 1.0), std::vector<double>(n, 4.0), std::vector<double>(n, 1.0)};
    t.diag.front() = t.diag.back() = 2.0;
    factor_ = TridiagonalFactor(t);
  }
}

void Spline1D::fit(std::span<const double> values, double slope_start, double slope_end) {
  const std::size_t n = grid_.size();
  if (values.size() != n) throw std::invalid_argument("spline: value count mismatch");
  std::copy(values.begin(), values.end(), y_.begin());
  const double h = grid_.spacing();
  const double c = 6.0 / (h * h);
  if (end_ == SplineEnd::Periodic) {
    for (std::size_t i = 0; i < n; ++i)
      m_[i] = c * (y_[(i + 1) % n] - 2.0 * y_[i] + y_[(i + n - 1) % n]);
    std::get<CyclicTridiagonal>(factor_).solve(m_);
  } else if (end_ == SplineEnd::Natural) {
    m_.front() = m_.back() = 0.0;
    for (std::size_t i = 1; i + 1 < n; ++i) m_[i] = c * (y_[i + 1] - 2.0 * y_[i] + y_[i - 1]);
    std::get<TridiagonalFactor>(factor_).solve(std::span<double>(m_).subspan(1, n - 2));
  } else {
    for (std::size_t i = 1; i + 1 < n; ++i) m_[i] = c * (y_[i + 1] - 2.0 * y_[i] + y_[i - 1]);
    m_[0] = 6.0 / h * ((y_[1] - y_[0]) / h - slope_start);
    m_[n - 1] = 6.0 / h * (slope_end - (y_[n - 1] - y_[n - 2]) / h);
    std::get<TridiagonalFactor>(factor_).solve(m_);
  }
}

std::size_t Spline1D::locate(double x, double& t) const { return cell_of(grid_, x, t); }

double Spline1D::operator()(double x) const {
  double t;
  const std::size_t i = locate(x, t);
  const std::size_t j = (i + 1) % grid_.size();
  const double a = 1.0 - t, h = grid_.spacing();
  return a * y_[i] + t * y_[j] + h * h / 6.0 * ((a * a * a - a) * m_[i] + (t * t * t - t) * m_[j]);
}

double Spline1D::derivative(double x) const {
  double t;
  const std::size_t i = locate(x, t);
  const std::size_t j = (i + 1) % grid_.size();
  const double a = 1.0 - t, h = grid_.spacing();
  return (y_[j] - y_[i]) / h + h / 6.0 * (-(3.0 * a * a - 1.0) * m_[i] + (3.0 * t * t - 1.0) * m_[j]);
}

PeriodicSplineSolver::PeriodicSplineSolver(std::size_t n, double h)
    : n_(n), scale_(6.0 / (h * h)), cyclic_(n, 1.0, 4.0, 1.0) {}

void PeriodicSplineSolver::second_derivatives(std::span<const double> y, std::span<double> out) const {
  for (std::size_t i = 0; i < n_; ++i)
    out[i] = scale_ * (y[(i + 1) % n_] - 2.0 * y[i] + y[(i + n_ - 1) % n_]);
  cyclic_.solve(out);
}

Spline2D::Spline2D(const Grid1D& theta, const Grid1D& z)
    : gt_(theta), gz_(z), st_(theta.size(), theta.spacing()), sz_(z.size(), z.spacing()) {
  if (!theta.periodic() || !z.periodic()) throw std::invalid_argument("Spline2D: both directions must be periodic");
  const std::size_t n = theta.size() * z.size();
  f_.assign(n, 0.0);
  mt_.assign(n, 0.0);
  mz_.assign(n, 0.0);
  mtz_.assign(n, 0.0);
  col_in_.assign(theta.size(), 0.0);
  col_out_.assign(theta.size(), 0.0);
}

void Spline2D::fit(std::span<const double> values) {
  const std::size_t nt = gt_.size(), nz = gz_.size();
  if (values.size() != nt * nz) throw std::invalid_argument("Spline2D: value count mismatch");
  std::copy(values.begin(), values.end(), f_.begin());
  for (std::size_t i = 0; i < nt; ++i)
    sz_.second_derivatives(std::span<const double>(f_).subspan(i * nz, nz),
                           std::span<double>(mz_).subspan(i * nz, nz));
  auto along_theta = [&](const std::vector<double>& src, std::vector<double>& dst) {
    for (std::size_t j = 0; j < nz; ++j) {
      for (std::size_t i = 0; i < nt; ++i) col_in_[i] = src[i * nz + j];
      st_.second_derivatives(col_in_, col_out_);
      for (std::size_t i = 0; i < nt; ++i) dst[i * nz + j] = col_out_[i];
    }
  };
  along_theta(f_, mt_);
  along_theta(mz_, mtz_);
}

double Spline2D::operator()(double theta, double z) const {
  double t, u;
  const std::size_t nt = gt_.size(), nz = gz_.size();
  const std::size_t i0 = cell_of(gt_, theta, t), j0 = cell_of(gz_, z, u);
  const std::size_t i1 = (i0 + 1) % nt, j1 = (j0 + 1) % nz;
  const double ht = gt_.spacing(), hz = gz_.spacing();
  const double at[2] = {1.0 - t, t};
  const double ct[2] = {(at[0] * at[0] * at[0] - at[0]) * ht * ht / 6.0, (t * t * t - t) * ht * ht / 6.0};
  const double az[2] = {1.0 - u, u};
  const double cz[2] = {(az[0] * az[0] * az[0] - az[0]) * hz * hz / 6.0, (u * u * u - u) * hz * hz / 6.0};
  const std::size_t ii[2] = {i0, i1}, jj[2] = {j0, j1};
  double s = 0.0;
  for (int p = 0; p < 2; ++p)
    for (int q = 0; q < 2; ++q) {
      const std::size_t k = ii[p] * nz + jj[q];
      s += at[p] * az[q] * f_[k] + ct[p] * az[q] * mt_[k] + at[p] * cz[q] * mz_[k] + ct[p] * cz[q] * mtz_[k];
    }
  return s;
}

}  // namespace gksplit
