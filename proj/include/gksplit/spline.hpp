#pragma once

#include <span>
#include <variant>
#include <vector>

#include "gksplit/grid.hpp"
#include "gksplit/linsolve.hpp"

namespace gksplit {

enum class SplineEnd { Periodic, Natural, Clamped };

/// Cubic interpolating spline on uniform knots, stored in second-derivative
/// (M) form. On [x_i, x_{i+1}] with t = (x - x_i)/h:
///   s = (1-t) y_i + t y_{i+1} + h^2/6 [((1-t)^3 - (1-t)) M_i + (t^3 - t) M_{i+1}]
/// The factorization depends only on the knots, so one object can be refitted
/// for many lines.
class Spline1D {
public:
  Spline1D() = default;
  /// Periodic end conditions need a periodic grid, the others a non-periodic one.
  Spline1D(const Grid1D& knots, SplineEnd end);

  /// Slopes are used only for Clamped ends.
  void fit(std::span<const double> values, double slope_start = 0.0, double slope_end = 0.0);

  /// Periodic splines wrap x. Non-periodic splines extend the end cubics
  /// beyond the knot range (callers treat out-of-range points themselves).
  double operator()(double x) const;
  double derivative(double x) const;

  const Grid1D& knots() const { return grid_; }
  SplineEnd end() const { return end_; }
  std::span<const double> second_derivatives() const { return m_; }

private:
  std::size_t locate(double x, double& t) const;

  Grid1D grid_;
  SplineEnd end_ = SplineEnd::Natural;
  std::variant<std::monostate, TridiagonalFactor, CyclicTridiagonal> factor_;
  std::vector<double> y_, m_;
};

/// Periodic second derivatives of a line: solves M_{i-1} + 4 M_i + M_{i+1} = 6/h^2 (y_{i+1} - 2 y_i + y_{i-1}).
class PeriodicSplineSolver {
public:
  PeriodicSplineSolver() = default;
  PeriodicSplineSolver(std::size_t n, double h);
  /// in: values; out: second derivatives (may alias nothing; sizes n)
  void second_derivatives(std::span<const double> values, std::span<double> out) const;

private:
  std::size_t n_ = 0;
  double scale_ = 0.0;
  CyclicTridiagonal cyclic_{3, 1.0, 4.0, 1.0};
};

/// Tensor-product periodic x periodic cubic spline on (theta, z).
/// Values row-major with theta slow.
class Spline2D {
public:
  Spline2D() = default;
  Spline2D(const Grid1D& theta, const Grid1D& z);

  void fit(std::span<const double> values);
  double operator()(double theta, double z) const;

  const Grid1D& theta() const { return gt_; }
  const Grid1D& z() const { return gz_; }

private:
  Grid1D gt_, gz_;
  PeriodicSplineSolver st_, sz_;
  std::vector<double> f_, mt_, mz_, mtz_;
  std::vector<double> col_in_, col_out_;
};

}  // namespace gksplit
