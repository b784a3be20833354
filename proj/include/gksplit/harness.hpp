#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "gksplit/bracket.hpp"
#include "gksplit/diagnostics.hpp"
#include "gksplit/physics.hpp"
#include "gksplit/splitting.hpp"
#include "gksplit/time_integration.hpp"

namespace gksplit {

enum class Problem { Vortex, ConstAdv };
std::string to_string(Problem p);
Problem parse_problem(const std::string& name);

/// Background handling for the poloidal test problems.
enum class Background { Auto, On, Off };

/// Single poloidal advection run on an (r, theta) annulus.
struct PoloidalRunConfig {
  Problem problem = Problem::Vortex;
  std::size_t nr = 64;
  std::size_t ntheta = 64;
  double dt = 0.001 / 64;
  std::size_t steps = 1280;
  StencilOrder order = StencilOrder::Order4;
  BoundaryRule::Kind bc_r = BoundaryRule::Kind::Extrapolation;
  IntegratorConfig integrator;
  ModelParams model;  ///< r_min, r_max and the equilibrium profiles
  /// Exponent applied to the cosine cap of the initial bump.
  int bump_power = 4;
  /// Auto: f_eq + bump for extrapolation, bump only for the homogeneous closures.
  Background background = Background::Auto;
};

struct PoloidalStepRecord {
  std::size_t step = 0;
  double t = 0.0;
  double mass = 0.0, l2 = 0.0, energy = 0.0;
  Indicators indicators;
  StepReport report;
};

struct ErrorReport {
  std::size_t nr = 0, ntheta = 0, steps = 0;
  double t_end = 0.0;
  double l2_error = 0.0;   ///< sqrt(sum e^2 r dr dtheta) against the exact solution
  double max_error = 0.0;
  std::size_t domain_exits = 0;
  double rel_mass = 0.0, rel_l2 = 0.0, rel_energy = 0.0;  ///< |Q(T) - Q(0)| / |Q(0)|
  double max_cfl = 0.0;
  std::size_t cn_iterations = 0;
  Field2D final_state;
};

/// Initial data, operator and closures of a poloidal test problem.
struct PoloidalProblem {
  Grid2D grid;
  Field2D phi;
  Field2D f0;
  BracketBoundary boundary;
  Trajectory trajectory;
  std::function<double(double, double)> initial;  ///< f0 as a function of (r, theta)
};

PoloidalProblem make_poloidal_problem(const PoloidalRunConfig& cfg);

/// Weighted discrete L2 norm sqrt(sum v^2 w).
double weighted_l2(std::span<const double> v, std::span<const double> w);

using PoloidalObserver = std::function<void(const PoloidalStepRecord&)>;

/// Advance cfg.steps steps and compare with the exact solution at the final
/// time. The observer, when set, receives a record after every step (and once
/// for step 0). Throws NumericalAbort on non-finite values.
ErrorReport run_poloidal(const PoloidalRunConfig& cfg, const PoloidalObserver& observer = {});

struct RefinementStudy {
  std::vector<std::size_t> nr, ntheta;
  std::vector<double> spacing;  ///< coarse dr of each successive pair
  std::vector<double> errors;   ///< coarse-vs-fine weighted L2 difference
  std::vector<double> pairwise_orders;
  double slope = 0.0;
  bool monotone = true;
};

/// Least-squares slope of log(error) against log(spacing).
double fit_loglog_slope(std::span<const double> spacing, std::span<const double> errors);

/// Levels k = 0..levels-1 use nr = (base_nr - 1) 2^k + 1, ntheta = base_ntheta 2^k
/// with the same dt and step count; fine solutions are restricted to the coarse
/// nodes.
RefinementStudy convergence_study(PoloidalRunConfig cfg, std::size_t base_nr,
                                  std::size_t base_ntheta, std::size_t levels);

/// Deterministic 64-bit linear congruential generator (Knuth MMIX constants);
/// doubles from the top 53 bits.
class IndicatorRng {
public:
  explicit IndicatorRng(std::uint64_t seed) : state_(seed) {}
  double uniform(double lo, double hi);

private:
  std::uint64_t state_;
};

struct IndicatorRow {
  BoundaryRule::Kind bc;
  StencilOrder order;
  Indicators indicators;
};

/// Random phi and f in [-amplitude, amplitude] satisfying the closures.
std::vector<IndicatorRow> run_indicator_table(std::size_t n, const std::vector<StencilOrder>& orders,
                                              const std::vector<BoundaryRule::Kind>& bcs,
                                              std::uint64_t seed, const ModelParams& model,
                                              double amplitude = 100.0);

/// Full-model run on a (r, theta, z, v) grid.
struct GkRunConfig {
  std::size_t nr = 32, ntheta = 32, nz = 8, nv = 32;
  double dt = 8.0;
  std::size_t steps = 100;
  ModelParams model;
  SplittingConfig splitting;
};

struct GkRunResult {
  DiagnosticsSeries series;
  Distribution4D final_state;  ///< last finite state
  Field3D final_potential;
  std::size_t completed_steps = 0;
  bool aborted = false;
  std::string abort_reason;
};

/// Called after every completed step (and once for the initial state) with
/// the row, the state and the potential solved from that state.
using GkObserver = std::function<void(const DiagnosticsRow&, const Distribution4D&, const Field3D&)>;

/// Initial data from gk_initial, then `steps` model steps. After each step the
/// QN equation is solved on the new state for the phi columns. A step that
/// fails or produces non-finite values ends the run with `aborted` set and
/// the previous state kept.
GkRunResult run_gk(const GkRunConfig& cfg, const GkObserver& observer = {});

/// Largest relative change of each conserved quantity over the poloidal
/// substeps in `logs`.
ConservedSet max_poloidal_change(const std::vector<PoloidalSubstepLog>& logs);

void write_indicator_table(std::ostream& os, const std::vector<IndicatorRow>& rows);
void write_error_table(std::ostream& os, const std::vector<ErrorReport>& rows);
void write_refinement(std::ostream& os, const std::string& label, const RefinementStudy& s);

}  // namespace gksplit
