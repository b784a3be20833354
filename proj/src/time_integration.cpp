#include "gksplit/time_integration.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "gksplit/preconditioner.hpp"

namespace gksplit {

std::string to_string(IntegratorKind kind) {
  return kind == IntegratorKind::RK4 ? "rk4" : "cn2";
}

IntegratorKind parse_integrator(const std::string& name) {
  if (name == "rk4") return IntegratorKind::RK4;
  if (name == "cn2" || name == "cn") return IntegratorKind::CrankNicolson;
  throw std::invalid_argument("unknown integrator '" + name + "'");
}

std::string to_string(Preconditioner p) {
  switch (p) {
    case Preconditioner::None: return "none";
    case Preconditioner::Jacobi: return "jacobi";
    case Preconditioner::ThetaCirculant: return "theta-circulant";
  }
  return "none";
}

Preconditioner parse_preconditioner(const std::string& name) {
  if (name == "none") return Preconditioner::None;
  if (name == "jacobi") return Preconditioner::Jacobi;
  if (name == "theta-circulant") return Preconditioner::ThetaCirculant;
  throw std::invalid_argument("unknown preconditioner '" + name + "'");
}

namespace {

std::string nonconvergence_message(std::size_t it, double res) {
  std::ostringstream os;
  os << "Crank-Nicolson solve did not converge: " << it << " iterations, relative residual " << res;
  return os.str();
}

}  // namespace

NonConvergence::NonConvergence(std::size_t it, double res)
    : std::runtime_error(nonconvergence_message(it, res)), iterations(it), residual(res) {}

NumericalAbort::NumericalAbort(std::size_t s, const std::string& what)
    : std::runtime_error("step " + std::to_string(s) + ": " + what), step(s) {}

void StepWorkspace::resize(std::size_t n) {
  for (auto* v : {&k1, &k2, &k3, &k4, &tmp, &rhs}) v->resize(n);
}

namespace {

// out = -(M x + offset)
void rhs_eval(const BracketOperator& op, std::span<const double> offset, std::span<const double> x,
              std::span<double> out) {
  op.matrix().multiply(x, out);
  if (offset.empty()) {
    for (double& v : out) v = -v;
  } else {
    for (std::size_t k = 0; k < out.size(); ++k) out[k] = -(out[k] + offset[k]);
  }
}

}  // namespace

void rk4_step(const BracketOperator& op, std::span<const double> offset, std::span<double> f,
              double dt, StepWorkspace& ws) {
  const std::size_t n = f.size();
  ws.resize(n);
  rhs_eval(op, offset, f, ws.k1);
  for (std::size_t k = 0; k < n; ++k) ws.tmp[k] = f[k] + 0.5 * dt * ws.k1[k];
  rhs_eval(op, offset, ws.tmp, ws.k2);
  for (std::size_t k = 0; k < n; ++k) ws.tmp[k] = f[k] + 0.5 * dt * ws.k2[k];
  rhs_eval(op, offset, ws.tmp, ws.k3);
  for (std::size_t k = 0; k < n; ++k) ws.tmp[k] = f[k] + dt * ws.k3[k];
  rhs_eval(op, offset, ws.tmp, ws.k4);
  for (std::size_t k = 0; k < n; ++k)
    f[k] += dt / 6.0 * (ws.k1[k] + 2.0 * ws.k2[k] + 2.0 * ws.k3[k] + ws.k4[k]);
}

void rk4_step(const BracketOperator& op, std::span<double> f, double dt) {
  StepWorkspace ws;
  rk4_step(op, op.has_offset() ? op.offset() : std::span<const double>{}, f, dt, ws);
}

StepReport cn_step(const BracketOperator& op, std::span<const double> offset, std::span<double> f,
                   double dt, const IntegratorConfig& cfg, StepWorkspace& ws) {
  const std::size_t n = f.size();
  ws.resize(n);
  const CsrMatrix& m = op.matrix();
  const double h = 0.5 * dt;

  // rhs = f - h M f - dt offset
  m.multiply(f, ws.tmp);
  for (std::size_t k = 0; k < n; ++k)
    ws.rhs[k] = f[k] - h * ws.tmp[k] - (offset.empty() ? 0.0 : dt * offset[k]);

  LinearOperator apply = [&](std::span<const double> x, std::span<double> y) {
    m.multiply(x, y);
    for (std::size_t k = 0; k < n; ++k) y[k] = x[k] + h * y[k];
  };
  LinearOperator precondition;
  std::vector<double> inv_diag;
  const Grid2D& g = op.grid();
  if (cfg.preconditioner == Preconditioner::Jacobi) {
    inv_diag = m.diagonal();
    for (double& d : inv_diag) d = 1.0 / (1.0 + h * d);
    precondition = [&](std::span<const double> x, std::span<double> y) {
      for (std::size_t k = 0; k < n; ++k) y[k] = inv_diag[k] * x[k];
    };
  } else if (cfg.preconditioner == Preconditioner::ThetaCirculant && g.second.periodic()) {
    auto& pc = ws.circulant;
    if (!pc || pc->nr() != g.first.size() || pc->ntheta() != g.second.size())
      pc = std::make_shared<ThetaCirculantPreconditioner>(g.first.size(), g.second.size());
    pc->rebuild(m, h);
    precondition = [p = pc.get()](std::span<const double> x, std::span<double> y) { p->apply(x, y); };
  }
  const GmresOptions opt{cfg.tolerance, cfg.max_iterations, cfg.restart};
  const KrylovResult res = gmres(apply, ws.rhs, f, opt, precondition);
  if (!res.converged) throw NonConvergence(res.iterations, res.relative_residual);
  return {res.relative_residual, res.iterations, 0.0};
}

StepReport cn_step(const BracketOperator& op, std::span<double> f, double dt,
                   const IntegratorConfig& cfg) {
  StepWorkspace ws;
  return cn_step(op, op.has_offset() ? op.offset() : std::span<const double>{}, f, dt, cfg, ws);
}

StepReport integrate_step(const BracketOperator& op, std::span<const double> offset,
                          std::span<double> f, double dt, const IntegratorConfig& cfg,
                          StepWorkspace& ws) {
  StepReport rep;
  if (cfg.kind == IntegratorKind::RK4)
    rk4_step(op, offset, f, dt, ws);
  else
    rep = cn_step(op, offset, f, dt, cfg, ws);
  rep.cfl = cfl_number(op, dt, min_spacing(op.grid()));
  return rep;
}

double cfl_number(const BracketOperator& op, double dt, double dx_min) {
  return op.max_abs_entry() * dt / dx_min;
}

double min_spacing(const Grid2D& g) {
  const double d1 = g.first.spacing();
  double d2 = g.second.spacing();
  if (g.metric == Metric::Polar) d2 *= g.first.start();
  return std::min(d1, d2);
}

bool all_finite(std::span<const double> v) {
  return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

}  // namespace gksplit
