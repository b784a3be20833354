#include "gksplit/harness.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <stdexcept>

namespace gksplit {

std::string to_string(Problem p) { return p == Problem::Vortex ? "vortex" : "constadv"; }

Problem parse_problem(const std::string& name) {
  if (name == "vortex") return Problem::Vortex;
  if (name == "constadv") return Problem::ConstAdv;
  throw std::invalid_argument("unknown problem '" + name + "'");
}

double weighted_l2(std::span<const double> v, std::span<const double> w) {
  std::vector<double> t(v.size());
  for (std::size_t k = 0; k < v.size(); ++k) t[k] = v[k] * v[k] * w[k];
  return std::sqrt(compensated_sum(t));
}

PoloidalProblem make_poloidal_problem(const PoloidalRunConfig& cfg) {
  const ModelParams& m = cfg.model;
  Grid2D grid = make_polar_grid(cfg.nr, cfg.ntheta, m.r_min, m.r_max);
  if (cfg.bc_r == BoundaryRule::Kind::Periodic) grid.first = Grid1D(cfg.nr, m.r_min, m.r_max, true);

  const Equilibrium eq = make_equilibrium(m);
  const bool background =
      cfg.background == Background::On ||
      (cfg.background == Background::Auto && cfg.bc_r == BoundaryRule::Kind::Extrapolation);
  const int power = cfg.bump_power;
  auto initial = [eq, background, power](double r, double t) {
    const double b = std::pow(vortex_bump(r, t), power);
    return background ? eq.feq(r, 0.0) + b : b;
  };
  const auto phi_fn = cfg.problem == Problem::Vortex ? vortex_phi : rotation_phi;

  PoloidalProblem p;
  p.grid = grid;
  p.phi = Field2D::from_function(grid, phi_fn);
  p.f0 = Field2D::from_function(grid, initial);
  p.trajectory = cfg.problem == Problem::Vortex ? Trajectory::Vortex : Trajectory::Rotation;
  p.initial = initial;

  // The potential is a given analytic field: its radial halo is the field
  // itself. The closure under study applies to f.
  p.boundary.phi = {BoundaryRule::extrapolation(phi_fn), BoundaryRule::periodic()};
  if (cfg.bc_r == BoundaryRule::Kind::Periodic) p.boundary.phi.first = BoundaryRule::periodic();
  switch (cfg.bc_r) {
    case BoundaryRule::Kind::Periodic:
      p.boundary.f = {BoundaryRule::periodic(), BoundaryRule::periodic()};
      break;
    case BoundaryRule::Kind::DirichletZero:
      p.boundary.f = {BoundaryRule::dirichlet(), BoundaryRule::periodic()};
      break;
    case BoundaryRule::Kind::Extrapolation:
      p.boundary.f = {BoundaryRule::extrapolation([eq, background](double r, double) {
                        return background ? eq.feq(r, 0.0) : 0.0;
                      }),
                      BoundaryRule::periodic()};
      break;
  }
  return p;
}

namespace {

struct Conserved2D {
  double mass, l2, energy;
};

Conserved2D conserved_2d(std::span<const double> f, std::span<const double> phi,
                         std::span<const double> w) {
  std::vector<double> a(f.size()), b(f.size()), c(f.size());
  for (std::size_t k = 0; k < f.size(); ++k) {
    a[k] = f[k] * w[k];
    b[k] = f[k] * f[k] * w[k];
    c[k] = phi[k] * f[k] * w[k];
  }
  return {compensated_sum(a), compensated_sum(b), compensated_sum(c)};
}

double rel(double now, double ref) {
  return ref != 0.0 ? std::fabs(now - ref) / std::fabs(ref) : std::fabs(now - ref);
}

}  // namespace

ErrorReport run_poloidal(const PoloidalRunConfig& cfg, const PoloidalObserver& observer) {
  const PoloidalProblem p = make_poloidal_problem(cfg);
  const BracketOperator op(p.phi, cfg.order, p.boundary);
  const auto w = polar_weights(p.grid);
  std::vector<double> f = p.f0.data();
  const std::span<const double> offset =
      op.has_offset() ? op.offset() : std::span<const double>{};

  ErrorReport rep;
  rep.nr = cfg.nr;
  rep.ntheta = cfg.ntheta;
  rep.steps = cfg.steps;
  const Conserved2D c0 = conserved_2d(f, p.phi.values(), w);
  auto emit = [&](std::size_t step, const StepReport& sr) {
    if (!observer) return;
    PoloidalStepRecord rec;
    rec.step = step;
    rec.t = static_cast<double>(step) * cfg.dt;
    const Conserved2D c = conserved_2d(f, p.phi.values(), w);
    rec.mass = c.mass;
    rec.l2 = c.l2;
    rec.energy = c.energy;
    rec.indicators = algebraic_indicators(op, p.phi, Field2D(p.grid, f), w);
    rec.report = sr;
    observer(rec);
  };
  emit(0, StepReport{});

  StepWorkspace ws;
  for (std::size_t s = 1; s <= cfg.steps; ++s) {
    const StepReport sr = integrate_step(op, offset, f, cfg.dt, cfg.integrator, ws);
    if (!all_finite(f)) throw NumericalAbort(s, "non-finite distribution (CFL " + std::to_string(sr.cfl) + ")");
    rep.max_cfl = std::max(rep.max_cfl, sr.cfl);
    rep.cn_iterations += sr.iterations;
    emit(s, sr);
  }

  rep.t_end = static_cast<double>(cfg.steps) * cfg.dt;
  const ExactSolution ex = exact_solution(p.trajectory, rep.t_end, p.grid, p.initial);
  rep.domain_exits = ex.domain_exits;
  std::vector<double> err(f.size()), wv(f.size());
  std::size_t used = 0;
  for (std::size_t k = 0; k < f.size(); ++k) {
    const double e = f[k] - ex.values.data()[k];
    if (!std::isfinite(e)) continue;
    err[used] = e;
    wv[used] = w[k];
    ++used;
    rep.max_error = std::max(rep.max_error, std::fabs(e));
  }
  err.resize(used);
  wv.resize(used);
  rep.l2_error = weighted_l2(err, wv);

  const Conserved2D c1 = conserved_2d(f, p.phi.values(), w);
  rep.rel_mass = rel(c1.mass, c0.mass);
  rep.rel_l2 = rel(c1.l2, c0.l2);
  rep.rel_energy = rel(c1.energy, c0.energy);
  rep.final_state = Field2D(p.grid, std::move(f));
  return rep;
}

double fit_loglog_slope(std::span<const double> spacing, std::span<const double> errors) {
  const std::size_t n = spacing.size();
  if (n < 2 || errors.size() != n) throw std::invalid_argument("slope fit: need >= 2 points");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t k = 0; k < n; ++k) {
    const double x = std::log(spacing[k]), y = std::log(errors[k]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double dn = static_cast<double>(n);
  return (dn * sxy - sx * sy) / (dn * sxx - sx * sx);
}

RefinementStudy convergence_study(PoloidalRunConfig cfg, std::size_t base_nr,
                                  std::size_t base_ntheta, std::size_t levels) {
  if (levels < 3) throw std::invalid_argument("convergence study: need at least 3 levels");
  RefinementStudy st;
  std::vector<Field2D> finals;
  for (std::size_t k = 0; k < levels; ++k) {
    const bool periodic_r = cfg.bc_r == BoundaryRule::Kind::Periodic;
    cfg.nr = periodic_r ? base_nr << k : ((base_nr - 1) << k) + 1;
    cfg.ntheta = base_ntheta << k;
    st.nr.push_back(cfg.nr);
    st.ntheta.push_back(cfg.ntheta);
    finals.push_back(run_poloidal(cfg).final_state);
  }
  for (std::size_t k = 0; k + 1 < levels; ++k) {
    const Field2D& c = finals[k];
    const Field2D& fine = finals[k + 1];
    const auto w = polar_weights(c.grid());
    std::vector<double> d(c.size());
    for (std::size_t i = 0; i < c.rows(); ++i)
      for (std::size_t j = 0; j < c.cols(); ++j) d[i * c.cols() + j] = fine(2 * i, 2 * j) - c(i, j);
    st.errors.push_back(weighted_l2(d, w));
    st.spacing.push_back(c.grid().first.spacing());
  }
  for (std::size_t k = 0; k + 1 < st.errors.size(); ++k) {
    st.pairwise_orders.push_back(std::log2(st.errors[k] / st.errors[k + 1]));
    if (!(st.errors[k + 1] < st.errors[k])) st.monotone = false;
  }
  st.slope = fit_loglog_slope(st.spacing, st.errors);
  return st;
}

double IndicatorRng::uniform(double lo, double hi) {
  state_ = state_ * 6364136223846793005ULL + 1442695040888963407ULL;
  const double u = static_cast<double>(state_ >> 11) * 0x1.0p-53;
  return lo + (hi - lo) * u;
}

std::vector<IndicatorRow> run_indicator_table(std::size_t n, const std::vector<StencilOrder>& orders,
                                              const std::vector<BoundaryRule::Kind>& bcs,
                                              std::uint64_t seed, const ModelParams& model,
                                              double amplitude) {
  const Equilibrium eq = make_equilibrium(model);
  auto feq0 = [eq](double r, double) { return eq.feq(r, 0.0); };
  std::vector<IndicatorRow> rows;
  for (const auto bc : bcs) {
    Grid2D grid = make_polar_grid(n, n, model.r_min, model.r_max);
    if (bc == BoundaryRule::Kind::Periodic) grid.first = Grid1D(n, model.r_min, model.r_max, true);
    IndicatorRng rng(seed);
    Field2D phi(grid), f(grid);
    for (double& v : phi.data()) v = rng.uniform(-amplitude, amplitude);
    for (double& v : f.data()) v = rng.uniform(-amplitude, amplitude);

    BracketBoundary b;
    if (bc == BoundaryRule::Kind::Periodic) {
      b.phi = b.f = {BoundaryRule::periodic(), BoundaryRule::periodic()};
    } else {
      b.phi = {BoundaryRule::dirichlet(), BoundaryRule::periodic()};
      b.f = bc == BoundaryRule::Kind::DirichletZero
                ? FieldBoundary{BoundaryRule::dirichlet(), BoundaryRule::periodic()}
                : FieldBoundary{BoundaryRule::extrapolation(feq0), BoundaryRule::periodic()};
      for (std::size_t j = 0; j < n; ++j) {
        phi(0, j) = phi(n - 1, j) = 0.0;
        const bool ext = bc == BoundaryRule::Kind::Extrapolation;
        f(0, j) = ext ? feq0(grid.first.node(0), 0.0) : 0.0;
        f(n - 1, j) = ext ? feq0(grid.first.node(static_cast<std::ptrdiff_t>(n - 1)), 0.0) : 0.0;
      }
    }
    const auto w = polar_weights(grid);
    for (const auto order : orders) {
      const BracketOperator op(phi, order, b);
      rows.push_back({bc, order, algebraic_indicators(op, phi, f, w)});
    }
  }
  return rows;
}

ConservedSet max_poloidal_change(const std::vector<PoloidalSubstepLog>& logs) {
  ConservedSet d;
  for (const auto& l : logs) {
    d.mass = std::max(d.mass, relative_error(l.before.mass, l.after.mass).value);
    d.l2 = std::max(d.l2, relative_error(l.before.l2, l.after.l2).value);
    d.e_pot = std::max(d.e_pot, relative_error(l.before.e_pot, l.after.e_pot).value);
    d.e_kin = std::max(d.e_kin, relative_error(l.before.e_kin, l.after.e_kin).value);
  }
  return d;
}

GkRunResult run_gk(const GkRunConfig& cfg, const GkObserver& observer) {
  const ModelParams& m = cfg.model;
  const PhaseGrid4D grid =
      make_phase_grid(cfg.nr, cfg.ntheta, cfg.nz, cfg.nv, m.r_min, m.r_max, m.major_radius, m.v_max);
  SplittingDriver driver(grid, m, cfg.splitting);
  GkRunResult res;
  Distribution4D f = gk_initial(grid, driver.equilibrium(), m);

  auto record = [&](std::size_t step) {
    driver.solve_potential(f);
    DiagnosticsRow row;
    row.step = step;
    row.t = static_cast<double>(step) * cfg.dt;
    row.conserved = conserved_set(f, driver.potential(), driver.equilibrium());
    row.phi_l2 = phi_l2(driver.potential());
    const auto& logs = driver.poloidal_logs();
    row.d_pol = max_poloidal_change(logs);
    if (!logs.empty()) row.indicators = logs.back().indicators;
    for (const auto& l : logs) {
      row.cfl = std::max(row.cfl, l.cfl);
      row.cn_iters += l.cn_iterations;
      row.cn_residual = std::max(row.cn_residual, l.cn_residual);
    }
    res.series.append(row);
    if (observer) observer(row, f, driver.potential());
  };
  record(0);

  for (std::size_t s = 1; s <= cfg.steps; ++s) {
    Distribution4D next = f;
    driver.clear_logs();
    try {
      driver.advance(next, cfg.dt);
      if (!next.all_finite()) throw NumericalAbort(s, "non-finite distribution");
    } catch (const std::exception& e) {
      res.aborted = true;
      res.abort_reason = e.what();
      break;
    }
    f = std::move(next);
    res.completed_steps = s;
    record(s);
  }
  driver.solve_potential(f);
  res.final_potential = driver.potential();
  res.final_state = std::move(f);
  return res;
}

void write_indicator_table(std::ostream& os, const std::vector<IndicatorRow>& rows) {
  os << std::scientific << std::setprecision(3);
  os << "bc,order,mass,l2,energy,mass_normalized,l2_normalized,energy_normalized\n";
  for (const auto& r : rows)
    os << to_string(r.bc) << ',' << (r.order == StencilOrder::Order2 ? 2 : 4) << ','
       << r.indicators.raw.mass << ',' << r.indicators.raw.l2 << ',' << r.indicators.raw.energy
       << ',' << r.indicators.normalized.mass << ',' << r.indicators.normalized.l2 << ','
       << r.indicators.normalized.energy << '\n';
  os << std::defaultfloat;
}

void write_error_table(std::ostream& os, const std::vector<ErrorReport>& rows) {
  os << std::scientific << std::setprecision(3);
  os << "nr,ntheta,l2_error,order,rel_mass,rel_l2,rel_energy\n";
  for (std::size_t k = 0; k < rows.size(); ++k) {
    const auto& r = rows[k];
    os << r.nr << ',' << r.ntheta << ',' << r.l2_error << ',';
    if (k > 0)
      os << std::fixed << std::setprecision(2) << std::log2(rows[k - 1].l2_error / r.l2_error)
         << std::scientific << std::setprecision(3);
    os << ',' << r.rel_mass << ',' << r.rel_l2 << ',' << r.rel_energy << '\n';
  }
  os << std::defaultfloat;
}

void write_refinement(std::ostream& os, const std::string& label, const RefinementStudy& s) {
  os << label << ": slope " << std::fixed << std::setprecision(3) << s.slope
     << (s.monotone ? "" : " (non-monotone error sequence)") << '\n';
  os << std::scientific << std::setprecision(3);
  for (std::size_t k = 0; k < s.errors.size(); ++k)
    os << "  " << s.nr[k] << 'x' << s.ntheta[k] << " vs " << s.nr[k + 1] << 'x' << s.ntheta[k + 1]
       << "  dr " << s.spacing[k] << "  error " << s.errors[k] << '\n';
  os << std::defaultfloat;
}

}  // namespace gksplit
