#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <type_traits>
#include <utility>
#include <vector>

namespace gksplit {

/// Uniform one-dimensional node set. Periodic grids exclude `stop`
/// (spacing = (stop - start) / n); non-periodic grids include both ends.
class Grid1D {
public:
  Grid1D() = default;
  Grid1D(std::size_t n, double start, double stop, bool periodic);

  std::size_t size() const { return n_; }
  double start() const { return start_; }
  double stop() const { return stop_; }
  double spacing() const { return spacing_; }
  bool periodic() const { return periodic_; }
  double node(std::ptrdiff_t i) const { return start_ + static_cast<double>(i) * spacing_; }
  std::vector<double> nodes() const;

  /// Same interval, spacing halved. Non-periodic grids keep every coarse node
  /// at even fine indices.
  Grid1D refined() const;

  bool operator==(const Grid1D&) const = default;

private:
  std::size_t n_ = 0;
  double start_ = 0.0;
  double stop_ = 0.0;
  double spacing_ = 0.0;
  bool periodic_ = false;
};

enum class Metric { Cartesian, Polar };

/// Two-dimensional tensor grid. `first` is the slow (row) index, `second` the
/// fast one. For polar grids first = r, second = theta.
struct Grid2D {
  Grid1D first;
  Grid1D second;
  Metric metric = Metric::Cartesian;

  std::size_t size() const { return first.size() * second.size(); }
  Grid2D refined() const { return {first.refined(), second.refined(), metric}; }
  bool operator==(const Grid2D&) const = default;
};

/// Polar grid on the annulus [rmin, rmax] x [0, 2pi). rmin > 0 so that the
/// 1/r metric factor stays finite.
Grid2D make_polar_grid(std::size_t nr, std::size_t ntheta, double rmin, double rmax);
Grid2D make_cartesian_grid(const Grid1D& x, const Grid1D& y);

/// Row-major flattening, first index slow: k = i * n_j + j.
std::size_t flatten_index(std::size_t i, std::size_t j, std::size_t n_i, std::size_t n_j);
std::pair<std::size_t, std::size_t> unflatten_index(std::size_t k, std::size_t n_i,
                                                    std::size_t n_j);

/// Node values on a Grid2D, row-major with the first coordinate slow.
class Field2D {
public:
  Field2D() = default;
  explicit Field2D(const Grid2D& grid, double fill = 0.0);
  Field2D(const Grid2D& grid, std::vector<double> values);

  template <class Fn>
  static Field2D from_function(const Grid2D& grid, Fn&& fn) {
    Field2D out(grid);
    for (std::size_t i = 0; i < grid.first.size(); ++i)
      for (std::size_t j = 0; j < grid.second.size(); ++j)
        out(i, j) = fn(grid.first.node(static_cast<std::ptrdiff_t>(i)),
                       grid.second.node(static_cast<std::ptrdiff_t>(j)));
    return out;
  }

  const Grid2D& grid() const { return grid_; }
  std::size_t size() const { return values_.size(); }
  std::size_t rows() const { return grid_.first.size(); }
  std::size_t cols() const { return grid_.second.size(); }

  double& operator()(std::size_t i, std::size_t j) { return values_[i * cols() + j]; }
  double operator()(std::size_t i, std::size_t j) const { return values_[i * cols() + j]; }

  std::span<double> values() { return values_; }
  std::span<const double> values() const { return values_; }
  std::vector<double>& data() { return values_; }
  const std::vector<double>& data() const { return values_; }

  bool all_finite() const;

private:
  Grid2D grid_;
  std::vector<double> values_;
};

/// Quadrature weights per node: r_i * dr * dtheta (polar) or dx * dy (Cartesian).
std::vector<double> node_weights(const Grid2D& grid);
std::vector<double> polar_weights(const Grid2D& grid);

/// Compensated (Neumaier) sum taken left to right in storage order; repeated
/// calls on identical data bit-match.
double compensated_sum(std::span<const double> terms);

/// Weighted integral sum_k field_k * weight_k.
double integrate(std::span<const double> field, std::span<const double> weights);
double integrate(const Field2D& field, std::span<const double> weights);

/// Phase-space grid (r, theta, z, v_par).
struct PhaseGrid4D {
  Grid1D r;
  Grid1D theta;
  Grid1D z;
  Grid1D vpar;

  std::size_t size() const { return r.size() * theta.size() * z.size() * vpar.size(); }
  Grid2D poloidal() const { return {r, theta, Metric::Polar}; }
  bool operator==(const PhaseGrid4D&) const = default;
};

/// Configuration-space values (potential, charge density), row-major in
/// (i_r, i_theta, i_z) order.
class Field3D {
public:
  Field3D() = default;
  Field3D(const Grid1D& r, const Grid1D& theta, const Grid1D& z, double fill = 0.0)
      : r_(r), theta_(theta), z_(z), values_(r.size() * theta.size() * z.size(), fill) {}
  explicit Field3D(const PhaseGrid4D& g, double fill = 0.0) : Field3D(g.r, g.theta, g.z, fill) {}

  const Grid1D& r() const { return r_; }
  const Grid1D& theta() const { return theta_; }
  const Grid1D& z() const { return z_; }
  std::size_t size() const { return values_.size(); }

  std::size_t index(std::size_t ir, std::size_t it, std::size_t iz) const {
    return (ir * theta_.size() + it) * z_.size() + iz;
  }
  double& operator()(std::size_t ir, std::size_t it, std::size_t iz) { return values_[index(ir, it, iz)]; }
  double operator()(std::size_t ir, std::size_t it, std::size_t iz) const { return values_[index(ir, it, iz)]; }

  /// (r, theta) plane at fixed z as a Field2D on the polar grid.
  Field2D poloidal_plane(std::size_t iz) const;
  void set_poloidal_plane(std::size_t iz, const Field2D& plane);

  std::span<double> values() { return values_; }
  std::span<const double> values() const { return values_; }
  bool all_finite() const;

private:
  Grid1D r_, theta_, z_;
  std::vector<double> values_;
};

PhaseGrid4D make_phase_grid(std::size_t nr, std::size_t ntheta, std::size_t nz, std::size_t nv,
                            double rmin, double rmax, double major_radius, double vmax);

/// Strided view over one line/plane of a Distribution4D. Aliases the owner's
/// storage.
template <class T>
class StridedView2D {
public:
  StridedView2D(T* base, std::size_t rows, std::size_t cols, std::size_t row_stride,
                std::size_t col_stride)
      : base_(base), rows_(rows), cols_(cols), row_stride_(row_stride), col_stride_(col_stride) {}
  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  T& operator()(std::size_t i, std::size_t j) const {
    return base_[i * row_stride_ + j * col_stride_];
  }
  void copy_to(std::span<std::remove_const_t<T>> out) const {
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) out[i * cols_ + j] = (*this)(i, j);
  }
  void copy_from(std::span<const std::remove_const_t<T>> in) const
    requires(!std::is_const_v<T>)
  {
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) (*this)(i, j) = in[i * cols_ + j];
  }

private:
  T* base_;
  std::size_t rows_, cols_, row_stride_, col_stride_;
};

template <class T>
class StridedView1D {
public:
  StridedView1D(T* base, std::size_t n, std::size_t stride) : base_(base), n_(n), stride_(stride) {}
  std::size_t size() const { return n_; }
  T& operator[](std::size_t k) const { return base_[k * stride_]; }

private:
  T* base_;
  std::size_t n_, stride_;
};

/// f(r, theta, z, v_par) stored row-major in (i_r, i_theta, i_z, i_v) order.
class Distribution4D {
public:
  Distribution4D() = default;
  explicit Distribution4D(const PhaseGrid4D& grid, double fill = 0.0);

  const PhaseGrid4D& grid() const { return grid_; }
  std::size_t size() const { return values_.size(); }

  std::size_t index(std::size_t ir, std::size_t it, std::size_t iz, std::size_t iv) const {
    return ((ir * nt_ + it) * nz_ + iz) * nv_ + iv;
  }
  double& operator()(std::size_t ir, std::size_t it, std::size_t iz, std::size_t iv) {
    return values_[index(ir, it, iz, iv)];
  }
  double operator()(std::size_t ir, std::size_t it, std::size_t iz, std::size_t iv) const {
    return values_[index(ir, it, iz, iv)];
  }

  /// (r, theta) plane at fixed (z, v).
  StridedView2D<double> poloidal_slice(std::size_t iz, std::size_t iv);
  StridedView2D<const double> poloidal_slice(std::size_t iz, std::size_t iv) const;
  /// (theta, z) plane at fixed (r, v).
  StridedView2D<double> flux_surface_slice(std::size_t ir, std::size_t iv);
  StridedView2D<const double> flux_surface_slice(std::size_t ir, std::size_t iv) const;
  /// Contiguous v line at fixed (r, theta, z).
  std::span<double> vpar_line(std::size_t ir, std::size_t it, std::size_t iz);
  std::span<const double> vpar_line(std::size_t ir, std::size_t it, std::size_t iz) const;

  std::span<double> values() { return values_; }
  std::span<const double> values() const { return values_; }
  bool all_finite() const;

private:
  PhaseGrid4D grid_;
  std::size_t nr_ = 0, nt_ = 0, nz_ = 0, nv_ = 0;
  std::vector<double> values_;
};

}  // namespace gksplit
