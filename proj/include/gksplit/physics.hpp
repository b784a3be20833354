#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <utility>

#include "gksplit/grid.hpp"

namespace gksplit {

/// Model parameters in normalized units (q = m = B0 = 1).
struct ModelParams {
  double r_min = 0.1;
  double r_max = 14.5;
  double major_radius = 239.8081535;
  double epsilon = 1e-6;
  double kappa_n0 = 0.055;
  double delta_r_n0 = 2.9;
  double kappa_ti = 0.27586;
  double delta_r_ti = 1.45;
  double kappa_te = 0.27586;
  double delta_r_te = 1.45;
  /// Profile centre; negative selects (r_max - r_min) / 2.
  double r_p = -1.0;
  /// Gaussian envelope width of the perturbation; negative selects
  /// 4 delta_r_n0 / delta_r_ti.
  double envelope_width = -1.0;
  double v_max = 7.32;
  int m = 15;
  int n = 1;
  double iota = 0.0;

  double profile_center() const { return r_p < 0.0 ? 0.5 * (r_max - r_min) : r_p; }
  double envelope() const { return envelope_width < 0.0 ? 4.0 * delta_r_n0 / delta_r_ti : envelope_width; }
};

/// P(r) = C exp(-kappa delta_r tanh((r - r_p) / delta_r)).
class RadialProfile {
public:
  RadialProfile() = default;
  RadialProfile(double c, double kappa, double delta_r, double r_p)
      : c_(c), kappa_(kappa), delta_r_(delta_r), r_p_(r_p) {}

  double operator()(double r) const;
  /// P'(r) / P(r) = -kappa sech^2((r - r_p) / delta_r)
  double log_derivative(double r) const;
  double constant() const { return c_; }

private:
  double c_ = 1.0, kappa_ = 0.0, delta_r_ = 1.0, r_p_ = 0.0;
};

/// (r_max - r_min) / integral of exp(-kappa delta_r tanh((r - r_p)/delta_r)) over
/// [r_min, r_max], by composite 10-point Gauss-Legendre on 64 panels.
double profile_normalization(double kappa, double delta_r, double r_p, double r_min, double r_max);

struct ProfileConstants {
  double c_ti = 1.0;
  double c_n0 = 1.0;
};
ProfileConstants profile_constants(const ModelParams& p);

struct Equilibrium {
  RadialProfile n0, ti, te;

  /// n0(r) / sqrt(2 pi Ti(r)) exp(-v^2 / (2 Ti(r)))
  double feq(double r, double vpar) const;
};

Equilibrium make_equilibrium(const ModelParams& p);

/// Vortex test: phi = -5 r^2 + sin(theta).
double vortex_phi(double r, double theta);
/// Rigid rotation sub-case: phi = -5 r^2.
double rotation_phi(double r, double theta);
/// cos(pi/8 rho) for rho = sqrt((r-7)^2 + 2 (theta-pi)^2) <= 4, else 0.
double vortex_bump(double r, double theta);

/// (phi0, f0) with f0 = feq(r, 0) + bump.
std::pair<Field2D, Field2D> vortex_initial(const Grid2D& grid, const Equilibrium& eq);

enum class Trajectory { Vortex, Rotation };

/// Position at time t of the characteristic starting at (r0, theta0).
std::optional<std::pair<double, double>> characteristic_forward(Trajectory kind, double r0,
                                                                double theta0, double t);
/// Starting point of the characteristic that reaches (r, theta) at time t.
/// Empty when the radicand is negative (the characteristic left the domain).
std::optional<std::pair<double, double>> characteristic_foot(Trajectory kind, double r,
                                                             double theta, double t);

struct ExactSolution {
  Field2D values;
  std::size_t domain_exits = 0;  ///< nodes whose foot was undefined (set to NaN)
};

/// f0 evaluated at the backward foot of every node.
ExactSolution exact_solution(Trajectory kind, double t, const Grid2D& grid,
                             const std::function<double(double, double)>& f0);

/// feq(r, v) [1 + eps exp(-(r - r_p)^2 / width) cos(m theta + n z / R0)]
Distribution4D gk_initial(const PhaseGrid4D& grid, const Equilibrium& eq, const ModelParams& p);

}  // namespace gksplit
