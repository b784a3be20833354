// gksplit command-line driver: indicators, vortex, constadv, convergence, gk.
// Exit codes: 0 ok, 2 configuration error, 3 numerical abort.

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "gksplit/config_io.hpp"
#include "gksplit/diagnostics.hpp"
#include "gksplit/harness.hpp"
#include "gksplit/time_integration.hpp"

namespace fs = std::filesystem;
using namespace gksplit;

namespace {

struct CommonFlags {
  std::string config;
  std::string out;
  std::optional<std::string> order, bc_r, bc_theta, integrator;
  std::optional<std::string> dt, steps, seed;
  std::vector<std::string> sets;
};

void add_common(CLI::App* cmd, CommonFlags& f) {
  cmd->add_option("--config", f.config, "key = value config file");
  cmd->add_option("--out", f.out, "output directory (output.directory)");
  cmd->add_option("--order", f.order, "stencil order {2|4}");
  cmd->add_option("--bc-r", f.bc_r, "radial closure {periodic|dirichlet|extrapolation}");
  cmd->add_option("--bc-theta", f.bc_theta, "poloidal closure {periodic}");
  cmd->add_option("--integrator", f.integrator, "{rk4|cn2}");
  cmd->add_option("--dt", f.dt, "time step");
  cmd->add_option("--steps", f.steps, "number of steps");
  cmd->add_option("--seed", f.seed, "random seed");
  cmd->add_option("--set", f.sets, "extra override key=value (repeatable)");
}

ParsedConfig resolve(const CommonFlags& f, const std::string& default_preset) {
  ParsedConfig p = f.config.empty() ? parse_config("", default_preset) : load_config(f.config, default_preset);
  auto flag = [&](const char* key, const std::optional<std::string>& v) {
    if (v) apply_flag(p, key, *v);
  };
  flag("numerics.order", f.order);
  flag("numerics.bc_r", f.bc_r);
  flag("numerics.bc_theta", f.bc_theta);
  flag("numerics.integrator", f.integrator);
  flag("numerics.dt", f.dt);
  flag("numerics.steps", f.steps);
  flag("seed", f.seed);
  if (!f.out.empty()) apply_flag(p, "output.directory", f.out);
  for (const auto& s : f.sets) {
    const auto eq = s.find('=');
    if (eq == std::string::npos) throw ConfigError(0, s, "--set expects key=value");
    auto trim = [](std::string x) {
      x.erase(0, x.find_first_not_of(" \t"));
      x.erase(x.find_last_not_of(" \t") + 1);
      return x;
    };
    apply_flag(p, trim(s.substr(0, eq)), trim(s.substr(eq + 1)));
  }
  return p;
}

std::ofstream open_out(const fs::path& path) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot write " + path.string());
  return os;
}

class RunDirectory {
public:
  RunDirectory(std::string command, ParsedConfig cfg) : dir_(cfg.config.output.directory) {
    fs::create_directories(dir_);
    manifest_.command = std::move(command);
    manifest_.config = std::move(cfg);
    manifest_.started = utc_timestamp();
  }
  const fs::path& dir() const { return dir_; }
  const RunConfig& config() const { return manifest_.config.config; }
  void extra(std::string key, std::string value) { manifest_.extra.emplace_back(std::move(key), std::move(value)); }
  void finish() {
    manifest_.finished = utc_timestamp();
    auto os = open_out(dir_ / "manifest.txt");
    write_manifest(os, manifest_);
  }

private:
  fs::path dir_;
  Manifest manifest_;
};

std::string poloidal_schedule(const RunConfig& c) {
  return std::string(c.numerics.integrator.kind == IntegratorKind::RK4 ? "rk4" : "cn2") + ", order " +
         (c.numerics.order == StencilOrder::Order2 ? "2" : "4") + ", bc_r " + to_string(c.numerics.bc_r) +
         ", bc_theta periodic";
}

// ---- subcommands

int cmd_indicators(RunDirectory& run) {
  const RunConfig& c = run.config();
  const auto rows = run_indicator_table(
      c.grid.nr, {StencilOrder::Order2, StencilOrder::Order4},
      {BoundaryRule::Kind::Periodic, BoundaryRule::Kind::DirichletZero, BoundaryRule::Kind::Extrapolation},
      c.seed, c.model, 100.0);
  if (c.grid.nr != c.grid.ntheta) run.extra("note", "indicator table uses grid.nr in both directions");
  {
    auto os = open_out(run.dir() / "diagnostics.csv");
    os << "bc,order,mass,l2,energy,mass_normalized,l2_normalized,energy_normalized\n" << std::setprecision(17);
    for (const auto& r : rows)
      os << to_string(r.bc) << ',' << (r.order == StencilOrder::Order2 ? 2 : 4) << ',' << r.indicators.raw.mass
         << ',' << r.indicators.raw.l2 << ',' << r.indicators.raw.energy << ',' << r.indicators.normalized.mass
         << ',' << r.indicators.normalized.l2 << ',' << r.indicators.normalized.energy << '\n';
  }
  auto os = open_out(run.dir() / "report.txt");
  os << "Algebraic indicators, N_r = N_theta = " << c.grid.nr << ", uniform data in [-100, 100], seed "
     << c.seed << "\n\n";
  write_indicator_table(os, rows);
  write_indicator_table(std::cout, rows);
  return kExitOk;
}

void write_poloidal_csv_header(std::ostream& os) {
  os << "step,t,mass,l2,energy,ind_mass,ind_l2,ind_energy,ind_mass_normalized,ind_l2_normalized,"
        "ind_energy_normalized,cfl,cn_iters,cn_residual\n";
}

int cmd_poloidal(RunDirectory& run, Problem problem, const std::vector<std::size_t>& sizes) {
  RunConfig c = run.config();
  c.numerics.problem = problem;
  run.extra("problem", to_string(problem));
  run.extra("schedule", poloidal_schedule(c));

  std::vector<std::size_t> ns = sizes;
  if (ns.empty()) ns.push_back(0);
  std::vector<ErrorReport> reports;
  auto csv = open_out(run.dir() / "diagnostics.csv");
  write_poloidal_csv_header(csv);
  csv << std::setprecision(17);

  for (std::size_t n : ns) {
    PoloidalRunConfig p = to_poloidal_run(c);
    std::string tag;
    if (n > 0) {
      // keep dt * N and the final time fixed
      const double scale = static_cast<double>(c.grid.nr) / static_cast<double>(n);
      const double t_end = c.numerics.dt * static_cast<double>(c.numerics.steps);
      p.nr = p.ntheta = n;
      p.dt = c.numerics.dt * scale;
      p.steps = static_cast<std::size_t>(std::llround(t_end / p.dt));
      tag = "_N" + std::to_string(n);
      csv << "# N = " << n << "\n";
    }
    const PoloidalProblem initial = make_poloidal_problem(p);
    write_snapshot(run.dir() / ("f_initial" + tag + ".snap"), initial.f0);
    const ErrorReport r = run_poloidal(p, [&](const PoloidalStepRecord& rec) {
      const auto& I = rec.indicators;
      csv << rec.step << ',' << rec.t << ',' << rec.mass << ',' << rec.l2 << ',' << rec.energy << ','
          << I.raw.mass << ',' << I.raw.l2 << ',' << I.raw.energy << ',' << I.normalized.mass << ','
          << I.normalized.l2 << ',' << I.normalized.energy << ',' << rec.report.cfl << ','
          << rec.report.iterations << ',' << rec.report.residual << '\n';
    });
    write_snapshot(run.dir() / ("f_final" + tag + ".snap"), r.final_state);
    auto fcsv = open_out(run.dir() / ("f_final" + tag + ".csv"));
    write_field_csv(fcsv, r.final_state);
    reports.push_back(r);
  }

  auto os = open_out(run.dir() / "report.txt");
  os << to_string(problem) << ": order " << (c.numerics.order == StencilOrder::Order2 ? 2 : 4) << ", bc_r "
     << to_string(c.numerics.bc_r) << ", " << (c.numerics.integrator.kind == IntegratorKind::RK4 ? "RK4" : "CN2")
     << "\n\n";
  write_error_table(os, reports);
  write_error_table(std::cout, reports);
  for (const auto& r : reports)
    if (r.domain_exits > 0)
      os << "N = " << r.nr << ": " << r.domain_exits << " nodes with characteristics leaving the domain\n";
  return kExitOk;
}

int cmd_convergence(RunDirectory& run) {
  const RunConfig& c = run.config();
  const PoloidalRunConfig p = to_poloidal_run(c);
  run.extra("schedule", poloidal_schedule(c));
  run.extra("refinement", "nr = (base - 1) 2^k + 1 (periodic r: base 2^k), ntheta = base 2^k, dt fixed");
  const RefinementStudy s = convergence_study(p, c.numerics.base, c.numerics.base, c.numerics.levels);
  {
    auto os = open_out(run.dir() / "diagnostics.csv");
    os << "nr_coarse,ntheta_coarse,dr_coarse,error,pairwise_order\n" << std::setprecision(17);
    for (std::size_t k = 0; k < s.errors.size(); ++k) {
      os << s.nr[k] << ',' << s.ntheta[k] << ',' << s.spacing[k] << ',' << s.errors[k] << ',';
      if (k > 0) os << s.pairwise_orders[k - 1];
      os << '\n';
    }
  }
  const std::string label = to_string(c.numerics.problem) + " order " +
                            (c.numerics.order == StencilOrder::Order2 ? "2" : "4") + " " +
                            to_string(c.numerics.bc_r);
  auto os = open_out(run.dir() / "report.txt");
  write_refinement(os, label, s);
  write_refinement(std::cout, label, s);
  return kExitOk;
}

int cmd_gk(RunDirectory& run) {
  const RunConfig& c = run.config();
  const GkRunConfig g = to_gk_run(c);
  run.extra("schedule",
            "QN(f^n); predictor C(dt/2) B(dt/2) A(dt/2); QN(f^{n+1/2}); corrector A(dt/2) B(dt/2) C(dt) B(dt/2) "
            "A(dt/2); A = flux surface, B = v_par, C = poloidal");
  run.extra("poloidal_integrator", poloidal_schedule(c));

  auto csv = open_out(run.dir() / "diagnostics.csv");
  csv << DiagnosticsSeries::csv_header() << '\n';
  const std::size_t every = c.output.snapshot_every;
  auto snapshot = [&](std::size_t step, const Distribution4D& f, const Field3D& phi) {
    char name[32];
    std::snprintf(name, sizeof name, "%06zu", step);
    write_snapshot(run.dir() / (std::string("f_") + name + ".snap"), f);
    write_snapshot(run.dir() / (std::string("phi_") + name + ".snap"), phi);
  };
  std::size_t last_snap = static_cast<std::size_t>(-1);
  const GkRunResult r = run_gk(g, [&](const DiagnosticsRow& row, const Distribution4D& f, const Field3D& phi) {
    DiagnosticsSeries::write_csv_row(csv, row);
    csv.flush();
    if (row.step == 0 || (every > 0 && row.step % every == 0)) {
      snapshot(row.step, f, phi);
      last_snap = row.step;
    }
  });
  if (last_snap != r.completed_steps) snapshot(r.completed_steps, r.final_state, r.final_potential);

  auto os = open_out(run.dir() / "report.txt");
  os << "gk run (" << g.nr << ", " << g.ntheta << ", " << g.nz << ", " << g.nv << "), dt = " << g.dt << "\n";
  os << "completed steps: " << r.completed_steps << " of " << g.steps << "\n";
  if (r.aborted) os << "aborted: " << r.abort_reason << "\n";
  const auto& rows = r.series.rows();
  ConservedSet worst;
  for (const auto& row : rows) {
    worst.mass = std::max(worst.mass, row.d_pol.mass);
    worst.l2 = std::max(worst.l2, row.d_pol.l2);
    worst.e_pot = std::max(worst.e_pot, row.d_pol.e_pot);
  }
  os << std::scientific << std::setprecision(3);
  os << "max per-substep relative change: mass " << worst.mass << ", l2 " << worst.l2 << ", e_pot " << worst.e_pot
     << "\n";
  std::size_t peak = 0;
  for (std::size_t k = 0; k < rows.size(); ++k)
    if (rows[k].phi_l2 > rows[peak].phi_l2) peak = k;
  if (!rows.empty()) os << "max ||phi||: " << rows[peak].phi_l2 << " at t = " << rows[peak].t << "\n";
  std::cout << "completed " << r.completed_steps << " steps" << (r.aborted ? ", aborted: " + r.abort_reason : "")
            << "\n";
  return r.aborted ? kExitNumericalAbort : kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"gksplit: Arakawa / semi-Lagrangian split solver experiments"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kToolVersion));

  CommonFlags flags;
  std::vector<std::size_t> sizes;
  auto* ind = app.add_subcommand("indicators", "algebraic indicator table for random fields");
  auto* vortex = app.add_subcommand("vortex", "vortex advection against the exact solution");
  auto* constadv = app.add_subcommand("constadv", "rigid rotation phi = -5 r^2 against the exact solution");
  auto* conv = app.add_subcommand("convergence", "refinement study with fixed dt");
  auto* gk = app.add_subcommand("gk", "full model run (default preset gk-small)");
  for (auto* cmd : {ind, vortex, constadv, conv, gk}) add_common(cmd, flags);
  for (auto* cmd : {vortex, constadv})
    cmd->add_option("--sizes", sizes, "run N_r = N_theta = N for each size, keeping dt*N and the final time")
        ->delimiter(',');

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfigError;
  }

  CLI::App* cmd = app.get_subcommands().front();
  const std::string name = cmd->get_name();
  try {
    RunDirectory run(name, resolve(flags, name == "gk" ? "gk-small" : "vortex-paper"));
    int code = kExitOk;
    try {
      if (name == "indicators") code = cmd_indicators(run);
      if (name == "vortex") code = cmd_poloidal(run, Problem::Vortex, sizes);
      if (name == "constadv") code = cmd_poloidal(run, Problem::ConstAdv, sizes);
      if (name == "convergence") code = cmd_convergence(run);
      if (name == "gk") code = cmd_gk(run);
    } catch (const NumericalAbort& e) {
      run.extra("aborted", e.what());
      run.finish();
      std::cerr << "numerical abort: " << e.what() << "\n";
      return kExitNumericalAbort;
    } catch (const NonConvergence& e) {
      run.extra("aborted", e.what());
      run.finish();
      std::cerr << "numerical abort: " << e.what() << "\n";
      return kExitNumericalAbort;
    }
    if (code == kExitNumericalAbort) run.extra("aborted", "see report.txt");
    run.finish();
    return code;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
