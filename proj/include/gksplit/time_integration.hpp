#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "gksplit/bracket.hpp"
#include "gksplit/linsolve.hpp"

namespace gksplit {

enum class IntegratorKind { RK4, CrankNicolson };

std::string to_string(IntegratorKind kind);
IntegratorKind parse_integrator(const std::string& name);  // "rk4" | "cn2"

/// Right preconditioner for the CN GMRES solve. ThetaCirculant falls back to
/// None when the second grid direction is not periodic.
enum class Preconditioner { None, Jacobi, ThetaCirculant };

std::string to_string(Preconditioner p);
Preconditioner parse_preconditioner(const std::string& name);  // "none" | "jacobi" | "theta-circulant"

struct IntegratorConfig {
  IntegratorKind kind = IntegratorKind::RK4;
  double tolerance = 1e-12;  ///< CN relative residual
  std::size_t max_iterations = 500;
  std::size_t restart = 40;
  Preconditioner preconditioner = Preconditioner::ThetaCirculant;
};

struct StepReport {
  double residual = 0.0;
  std::size_t iterations = 0;
  double cfl = 0.0;
};

class NonConvergence : public std::runtime_error {
public:
  NonConvergence(std::size_t iterations, double residual);
  std::size_t iterations;
  double residual;
};

/// Raised by drivers when a step produces non-finite values.
class NumericalAbort : public std::runtime_error {
public:
  NumericalAbort(std::size_t step, const std::string& what);
  std::size_t step;
};

/// Scratch vectors for repeated steps on one system size.
class ThetaCirculantPreconditioner;

/// Scratch vectors for repeated steps on one system size. Copies share the
/// cached preconditioner.
struct StepWorkspace {
  std::vector<double> k1, k2, k3, k4, tmp, rhs;
  std::shared_ptr<ThetaCirculantPreconditioner> circulant;
  void resize(std::size_t n);
};

/// Classical RK4 for f' = -(M f + offset), in place.
void rk4_step(const BracketOperator& op, std::span<const double> offset, std::span<double> f,
              double dt, StepWorkspace& ws);
void rk4_step(const BracketOperator& op, std::span<double> f, double dt);

/// Crank-Nicolson: (I + dt/2 M) f+ = (I - dt/2 M) f - dt offset, solved by
/// restarted GMRES from the initial guess f. Throws NonConvergence.
StepReport cn_step(const BracketOperator& op, std::span<const double> offset, std::span<double> f,
                   double dt, const IntegratorConfig& cfg, StepWorkspace& ws);
StepReport cn_step(const BracketOperator& op, std::span<double> f, double dt,
                   const IntegratorConfig& cfg);

/// Dispatch on cfg.kind. The report carries the CFL value for the step.
StepReport integrate_step(const BracketOperator& op, std::span<const double> offset,
                          std::span<double> f, double dt, const IntegratorConfig& cfg,
                          StepWorkspace& ws);

/// max|M_ij| * dt / dx_min
double cfl_number(const BracketOperator& op, double dt, double dx_min);
/// Smallest physical spacing of a polar grid: min(dr, rmin * dtheta).
double min_spacing(const Grid2D& grid);

bool all_finite(std::span<const double> v);

}  // namespace gksplit
