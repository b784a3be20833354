#pragma once

#include <cstddef>
#include <vector>

#include "gksplit/grid.hpp"
#include "gksplit/linsolve.hpp"
#include "gksplit/physics.hpp"

namespace gksplit {

/// Radial coefficients of the quasi-neutrality equation
///   -[phi'' + (1/r + n0'/n0) phi' - m^2/r^2 phi] + phi / Te = rho
/// for every Fourier mode m in theta.
struct QNConfig {
  Grid1D r;
  std::vector<double> te;         ///< Te(r_i) > 0
  std::vector<double> dlog_n0;    ///< n0'(r_i) / n0(r_i)

  static QNConfig from_equilibrium(const Grid1D& r, const Equilibrium& eq);
};

/// rho(r, theta, z) = integral over v of (f - feq), trapezoidal rule on the v grid.
Field3D charge_density(const Distribution4D& f, const Equilibrium& eq);

/// FFT in theta, second-order finite differences in r, one tridiagonal solve
/// per mode. Boundary rules: m = 0 homogeneous Neumann at r_min (one-sided
/// second-order difference, folded into the first row), m != 0 homogeneous
/// Dirichlet at r_min; homogeneous Dirichlet at r_max for all modes.
class QNSolver {
public:
  QNSolver(QNConfig cfg, std::size_t ntheta);
  ~QNSolver();
  QNSolver(const QNSolver&) = delete;
  QNSolver& operator=(const QNSolver&) = delete;

  /// z-slices are independent and solved concurrently.
  Field3D solve(const Field3D& rho) const;

  std::size_t modes() const { return factors_.size(); }
  /// Weak diagonal dominance of each assembled mode system (strict in at least one row).
  const std::vector<bool>& diagonally_dominant() const { return dominant_; }
  bool all_diagonally_dominant() const;
  /// Assembled system for mode m (unknowns: nodes 0..N-2 for m = 0, 1..N-2 otherwise).
  const Tridiagonal& system(std::size_t m) const { return systems_[m]; }

private:
  void solve_slice(double* real_buf, void* spec_buf, std::size_t iz, const Field3D& rho, Field3D& phi) const;

  QNConfig cfg_;
  std::size_t nr_, nt_, nm_;
  std::vector<Tridiagonal> systems_;
  std::vector<TridiagonalFactor> factors_;
  std::vector<bool> dominant_;
  void* forward_ = nullptr;
  void* backward_ = nullptr;
};

}  // namespace gksplit
