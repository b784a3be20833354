#pragma once

#include <functional>
#include <span>

#include "gksplit/grid.hpp"
#include "gksplit/physics.hpp"
#include "gksplit/spline.hpp"

namespace gksplit {

/// Unit field-line direction on a flux surface, components along theta (arc
/// length) and z. iota = 0 gives (0, 1).
struct FieldLine {
  double b_theta = 0.0;
  double b_z = 1.0;

  /// Constant pitch b_theta / b_z = iota, normalized. Shipped runs use 0.
  static FieldLine from_iota(double iota);
};

/// What a v-foot outside [-v_max, v_max] picks up.
enum class VparOutside { Equilibrium, Zero };

/// Flux-surface step for one (theta, z) slice at fixed (r, v): every node
/// takes the spline value at (theta - v b_theta dt / r, z - v b_z dt).
/// Owns its spline, so one instance per worker.
class FluxSurfaceAdvector {
public:
  FluxSurfaceAdvector(const Grid1D& theta, const Grid1D& z);
  /// `slice` is row-major (theta slow), advected in place.
  void advect(std::span<double> slice, double r, double vpar, double dt, const FieldLine& line);

private:
  Spline2D spline_;
};

/// v-parallel step for one line at fixed (r, theta, z): node v takes the
/// natural-spline value at v + grad_par_phi dt.
class VparAdvector {
public:
  explicit VparAdvector(const Grid1D& v);
  /// `outside(v_foot)` supplies values for feet beyond the grid.
  void advect(std::span<double> line, double grad_par_phi, double dt,
              const std::function<double(double)>& outside);

private:
  Spline1D spline_;
  std::vector<double> out_;
};

/// b_theta (1/r) d_theta phi + b_z d_z phi, fourth-order central differences
/// with periodic wrap in theta and z.
Field3D grad_parallel(const Field3D& phi, const FieldLine& line);

/// Whole-distribution steps; slices run concurrently.
void advect_flux_surfaces(Distribution4D& f, double dt, const FieldLine& line);
void advect_vpar(Distribution4D& f, const Field3D& grad_par_phi, double dt, const Equilibrium& eq,
                 VparOutside outside = VparOutside::Equilibrium);

}  // namespace gksplit
