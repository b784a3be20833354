#include "gksplit/grid.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace gksplit {

Grid1D::Grid1D(std::size_t n, double start, double stop, bool periodic)
    : n_(n), start_(start), stop_(stop), periodic_(periodic) {
  if (n < 4) throw std::invalid_argument("Grid1D: need at least 4 nodes, got " + std::to_string(n));
  if (!(stop > start)) throw std::invalid_argument("Grid1D: stop must exceed start");
  spacing_ = periodic ? (stop - start) / static_cast<double>(n)
                      : (stop - start) / static_cast<double>(n - 1);
}

std::vector<double> Grid1D::nodes() const {
  std::vector<double> out(n_);
  for (std::size_t i = 0; i < n_; ++i) out[i] = node(static_cast<std::ptrdiff_t>(i));
  return out;
}

Grid1D Grid1D::refined() const {
  return periodic_ ? Grid1D(2 * n_, start_, stop_, true) : Grid1D(2 * n_ - 1, start_, stop_, false);
}

Grid2D make_polar_grid(std::size_t nr, std::size_t ntheta, double rmin, double rmax) {
  if (!(rmin > 0.0)) throw std::invalid_argument("polar grid: rmin must be positive");
  return {Grid1D(nr, rmin, rmax, false), Grid1D(ntheta, 0.0, 2.0 * std::numbers::pi, true),
          Metric::Polar};
}

Grid2D make_cartesian_grid(const Grid1D& x, const Grid1D& y) { return {x, y, Metric::Cartesian}; }

std::size_t flatten_index(std::size_t i, std::size_t j, std::size_t n_i, std::size_t n_j) {
  if (i >= n_i || j >= n_j) throw std::out_of_range("flatten_index: index outside grid");
  return i * n_j + j;
}

std::pair<std::size_t, std::size_t> unflatten_index(std::size_t k, std::size_t n_i,
                                                    std::size_t n_j) {
  if (k >= n_i * n_j) throw std::out_of_range("unflatten_index: index outside grid");
  return {k / n_j, k % n_j};
}

Field2D::Field2D(const Grid2D& grid, double fill) : grid_(grid), values_(grid.size(), fill) {}

Field2D::Field2D(const Grid2D& grid, std::vector<double> values)
    : grid_(grid), values_(std::move(values)) {
  if (values_.size() != grid_.size()) throw std::invalid_argument("Field2D: value count mismatch");
}

bool Field2D::all_finite() const {
  for (double v : values_)
    if (!std::isfinite(v)) return false;
  return true;
}

std::vector<double> node_weights(const Grid2D& grid) {
  const std::size_t ni = grid.first.size(), nj = grid.second.size();
  const double cell = grid.first.spacing() * grid.second.spacing();
  std::vector<double> w(ni * nj);
  for (std::size_t i = 0; i < ni; ++i) {
    const double wi = grid.metric == Metric::Polar
                          ? grid.first.node(static_cast<std::ptrdiff_t>(i)) * cell
                          : cell;
    for (std::size_t j = 0; j < nj; ++j) w[i * nj + j] = wi;
  }
  return w;
}

std::vector<double> polar_weights(const Grid2D& grid) {
  Grid2D g = grid;
  g.metric = Metric::Polar;
  return node_weights(g);
}

double compensated_sum(std::span<const double> terms) {
  double sum = 0.0, carry = 0.0;
  for (double x : terms) {
    const double t = sum + x;
    if (std::fabs(sum) >= std::fabs(x))
      carry += (sum - t) + x;
    else
      carry += (x - t) + sum;
    sum = t;
  }
  return sum + carry;
}

double integrate(std::span<const double> field, std::span<const double> weights) {
  if (field.size() != weights.size()) throw std::invalid_argument("integrate: shape mismatch");
  double sum = 0.0, carry = 0.0;
  for (std::size_t k = 0; k < field.size(); ++k) {
    const double x = field[k] * weights[k];
    const double t = sum + x;
    if (std::fabs(sum) >= std::fabs(x))
      carry += (sum - t) + x;
    else
      carry += (x - t) + sum;
    sum = t;
  }
  return sum + carry;
}

double integrate(const Field2D& field, std::span<const double> weights) {
  return integrate(field.values(), weights);
}

PhaseGrid4D make_phase_grid(std::size_t nr, std::size_t ntheta, std::size_t nz, std::size_t nv,
                            double rmin, double rmax, double major_radius, double vmax) {
  if (!(rmin > 0.0)) throw std::invalid_argument("phase grid: rmin must be positive");
  if (!(major_radius > 0.0) || !(vmax > 0.0))
    throw std::invalid_argument("phase grid: R0 and vmax must be positive");
  return {Grid1D(nr, rmin, rmax, false), Grid1D(ntheta, 0.0, 2.0 * std::numbers::pi, true),
          Grid1D(nz, 0.0, 2.0 * std::numbers::pi * major_radius, true),
          Grid1D(nv, -vmax, vmax, false)};
}

Distribution4D::Distribution4D(const PhaseGrid4D& grid, double fill)
    : grid_(grid),
      nr_(grid.r.size()),
      nt_(grid.theta.size()),
      nz_(grid.z.size()),
      nv_(grid.vpar.size()),
      values_(grid.size(), fill) {}

StridedView2D<double> Distribution4D::poloidal_slice(std::size_t iz, std::size_t iv) {
  return {values_.data() + index(0, 0, iz, iv), nr_, nt_, nt_ * nz_ * nv_, nz_ * nv_};
}
StridedView2D<const double> Distribution4D::poloidal_slice(std::size_t iz, std::size_t iv) const {
  return {values_.data() + index(0, 0, iz, iv), nr_, nt_, nt_ * nz_ * nv_, nz_ * nv_};
}
StridedView2D<double> Distribution4D::flux_surface_slice(std::size_t ir, std::size_t iv) {
  return {values_.data() + index(ir, 0, 0, iv), nt_, nz_, nz_ * nv_, nv_};
}
StridedView2D<const double> Distribution4D::flux_surface_slice(std::size_t ir,
                                                               std::size_t iv) const {
  return {values_.data() + index(ir, 0, 0, iv), nt_, nz_, nz_ * nv_, nv_};
}
std::span<double> Distribution4D::vpar_line(std::size_t ir, std::size_t it, std::size_t iz) {
  return {values_.data() + index(ir, it, iz, 0), nv_};
}
std::span<const double> Distribution4D::vpar_line(std::size_t ir, std::size_t it,
                                                  std::size_t iz) const {
  return {values_.data() + index(ir, it, iz, 0), nv_};
}

bool Distribution4D::all_finite() const {
  for (double v : values_)
    if (!std::isfinite(v)) return false;
  return true;
}

Field2D Field3D::poloidal_plane(std::size_t iz) const {
  Field2D out({r_, theta_, Metric::Polar});
  for (std::size_t i = 0; i < r_.size(); ++i)
    for (std::size_t j = 0; j < theta_.size(); ++j) out(i, j) = (*this)(i, j, iz);
  return out;
}

void Field3D::set_poloidal_plane(std::size_t iz, const Field2D& plane) {
  if (plane.rows() != r_.size() || plane.cols() != theta_.size())
    throw std::invalid_argument("Field3D: plane shape mismatch");
  for (std::size_t i = 0; i < r_.size(); ++i)
    for (std::size_t j = 0; j < theta_.size(); ++j) (*this)(i, j, iz) = plane(i, j);
}

bool Field3D::all_finite() const {
  for (double v : values_)
    if (!std::isfinite(v)) return false;
  return true;
}

}  // namespace gksplit
