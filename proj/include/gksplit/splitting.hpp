#pragma once

#include <cstddef>
#include <memory>
#include <vector>

#include "gksplit/bracket.hpp"
#include "gksplit/diagnostics.hpp"
#include "gksplit/physics.hpp"
#include "gksplit/qn_solver.hpp"
#include "gksplit/semi_lagrangian.hpp"
#include "gksplit/time_integration.hpp"

namespace gksplit {

struct SplittingConfig {
  StencilOrder order = StencilOrder::Order4;
  /// Radial closure of f in the poloidal step. Extrapolation uses feq(r, v)
  /// per v-slice; theta is always periodic.
  BoundaryRule::Kind f_bc_r = BoundaryRule::Kind::Extrapolation;
  IntegratorConfig integrator;
  VparOutside vpar_outside = VparOutside::Equilibrium;
  FieldLine line;
  /// Keep phi = 0 instead of solving the QN equation (null-dynamics checks).
  bool zero_potential = false;
  /// Evaluate algebraic indicators on every poloidal substep (one extra
  /// operator application per slice).
  bool indicators = true;
};

/// Record of one poloidal substep over all (z, v) slices.
struct PoloidalSubstepLog {
  double tau = 0.0;
  ConservedSet before, after;
  /// Raw indicators summed over slices with weight dz dv.
  IndicatorSet indicators;
  double cfl = 0.0;
  std::size_t cn_iterations = 0;
  double cn_residual = 0.0;
};

/// One model step: QN solve on f^n, predictor C(dt/2) B(dt/2) A(dt/2) applied
/// to f^n, QN solve on the predictor, corrector
/// A(dt/2) B(dt/2) C(dt) B(dt/2) A(dt/2) applied to f^n. Operators are
/// applied right to left, so A acts first.
class SplittingDriver {
public:
  SplittingDriver(const PhaseGrid4D& grid, const ModelParams& model, SplittingConfig cfg);

  void advance(Distribution4D& f, double dt);

  /// QN solve from f, then rebuild phi, grad_par phi and the per-z operators.
  void solve_potential(const Distribution4D& f);
  /// Install a potential directly (tests, frozen-phi studies).
  void set_potential(const Field3D& phi);

  void substep_a(Distribution4D& f, double tau) const;
  void substep_b(Distribution4D& f, double tau) const;
  /// Returns the substep record; also appended to poloidal_logs().
  PoloidalSubstepLog substep_c(Distribution4D& f, double tau);

  const Field3D& potential() const { return phi_; }
  const Field3D& grad_par_potential() const { return grad_par_; }
  const BracketOperator& poloidal_operator(std::size_t iz) const { return *ops_[iz]; }
  const Equilibrium& equilibrium() const { return eq_; }
  const QNSolver& qn() const { return *qn_; }
  const PhaseGrid4D& grid() const { return grid_; }
  const SplittingConfig& config() const { return cfg_; }

  /// Poloidal substeps since the last clear.
  const std::vector<PoloidalSubstepLog>& poloidal_logs() const { return logs_; }
  void clear_logs() { logs_.clear(); }

private:
  void refresh_operators();

  PhaseGrid4D grid_;
  ModelParams model_;
  SplittingConfig cfg_;
  Equilibrium eq_;
  std::unique_ptr<QNSolver> qn_;
  Field3D phi_, grad_par_;
  BracketBoundary boundary_;
  std::vector<std::unique_ptr<BracketOperator>> ops_;   // one per z
  std::vector<std::vector<double>> ghost_values_;       // per v, in halo-column order
  std::vector<PoloidalSubstepLog> logs_;
};

}  // namespace gksplit
