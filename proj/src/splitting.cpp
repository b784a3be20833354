#include "gksplit/splitting.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace gksplit {

SplittingDriver::SplittingDriver(const PhaseGrid4D& grid, const ModelParams& model, SplittingConfig cfg)
    : grid_(grid), model_(model), cfg_(std::move(cfg)), eq_(make_equilibrium(model)) {
  qn_ = std::make_unique<QNSolver>(QNConfig::from_equilibrium(grid_.r, eq_), grid_.theta.size());
  // phi vanishes at r_max and its ghosts are taken as zero; f's radial
  // closure follows the configuration
  boundary_.phi = {BoundaryRule::dirichlet(), BoundaryRule::periodic()};
  const Equilibrium eq = eq_;
  switch (cfg_.f_bc_r) {
    case BoundaryRule::Kind::Extrapolation:
      // the supplier is replaced per v-slice through ghost_values_
      boundary_.f = {BoundaryRule::extrapolation([eq](double r, double) { return eq.feq(r, 0.0); }),
                     BoundaryRule::periodic()};
      break;
    case BoundaryRule::Kind::DirichletZero:
      boundary_.f = {BoundaryRule::dirichlet(), BoundaryRule::periodic()};
      break;
    case BoundaryRule::Kind::Periodic:
      throw std::invalid_argument("splitting: the radial direction of the gyrokinetic model is not periodic");
  }
  phi_ = Field3D(grid_);
  ops_.reserve(grid_.z.size());
  const Field2D zero(grid_.poloidal());
  for (std::size_t iz = 0; iz < grid_.z.size(); ++iz)
    ops_.push_back(std::make_unique<BracketOperator>(zero, cfg_.order, boundary_));
  if (cfg_.f_bc_r == BoundaryRule::Kind::Extrapolation) {
    for (std::size_t iv = 0; iv < grid_.vpar.size(); ++iv) {
      const double v = grid_.vpar.node(static_cast<std::ptrdiff_t>(iv));
      ghost_values_.push_back(ops_[0]->halo_values([eq, v](double r, double) { return eq.feq(r, v); }));
    }
  }
  set_potential(phi_);
}

void SplittingDriver::set_potential(const Field3D& phi) {
  if (phi.size() != grid_.r.size() * grid_.theta.size() * grid_.z.size())
    throw std::invalid_argument("splitting: potential shape mismatch");
  phi_ = phi;
  grad_par_ = grad_parallel(phi_, cfg_.line);
  refresh_operators();
}

void SplittingDriver::refresh_operators() {
  for (std::size_t iz = 0; iz < grid_.z.size(); ++iz) ops_[iz]->update(phi_.poloidal_plane(iz));
}

void SplittingDriver::solve_potential(const Distribution4D& f) {
  if (cfg_.zero_potential) {
    set_potential(Field3D(grid_));
    return;
  }
  set_potential(qn_->solve(charge_density(f, eq_)));
}

void SplittingDriver::substep_a(Distribution4D& f, double tau) const {
  if (tau != 0.0) advect_flux_surfaces(f, tau, cfg_.line);
}

void SplittingDriver::substep_b(Distribution4D& f, double tau) const {
  if (tau != 0.0) advect_vpar(f, grad_par_, tau, eq_, cfg_.vpar_outside);
}

PoloidalSubstepLog SplittingDriver::substep_c(Distribution4D& f, double tau) {
  PoloidalSubstepLog log;
  log.tau = tau;
  log.before = conserved_set(f, phi_, eq_);
  const std::size_t nz = grid_.z.size(), nv = grid_.vpar.size();
  const std::size_t n2 = grid_.r.size() * grid_.theta.size();
  const Grid2D pg = grid_.poloidal();
  const auto w = polar_weights(pg);
  const double slice_weight = grid_.z.spacing() * grid_.vpar.spacing();

  std::vector<IndicatorSet> ind(nz * nv);
  std::vector<StepReport> reports(nz * nv);
  bool failed = false;
  std::string failure;
#pragma omp parallel
  {
    StepWorkspace ws;
    std::vector<double> buf(n2), offset(n2);
#pragma omp for collapse(2) schedule(static)
    for (std::size_t iz = 0; iz < nz; ++iz)
      for (std::size_t iv = 0; iv < nv; ++iv) {
        const BracketOperator& op = *ops_[iz];
        std::span<const double> off;
        if (op.has_offset()) {
          op.compute_offset(ghost_values_[iv], offset);
          off = offset;
        }
        auto view = f.poloidal_slice(iz, iv);
        view.copy_to(buf);
        const std::size_t k = iz * nv + iv;
        if (cfg_.indicators) {
          // indicators of the state entering the substep, with this slice's offset
          std::vector<double> jf(n2), a(n2), b(n2), c(n2);
          op.apply_linear(buf, jf);
          if (!off.empty())
            for (std::size_t q = 0; q < n2; ++q) jf[q] += off[q];
          const Field2D phi2 = phi_.poloidal_plane(iz);
          for (std::size_t q = 0; q < n2; ++q) {
            a[q] = w[q] * jf[q];
            b[q] = w[q] * buf[q] * jf[q];
            c[q] = w[q] * phi2.data()[q] * jf[q];
          }
          ind[k] = {compensated_sum(a), compensated_sum(b), compensated_sum(c)};
        }
        try {
          if (tau != 0.0) reports[k] = integrate_step(op, off, buf, tau, cfg_.integrator, ws);
        } catch (const std::exception& e) {
#pragma omp critical(splitting_failure)
          {
            failed = true;
            failure = e.what();
          }
        }
        view.copy_from(buf);
      }
  }
  if (failed) throw std::runtime_error("poloidal substep: " + failure);

  std::vector<double> im, il, ie;
  for (std::size_t k = 0; k < ind.size(); ++k) {
    im.push_back(slice_weight * ind[k].mass);
    il.push_back(slice_weight * ind[k].l2);
    ie.push_back(slice_weight * ind[k].energy);
    log.cfl = std::max(log.cfl, reports[k].cfl);
    log.cn_iterations += reports[k].iterations;
    log.cn_residual = std::max(log.cn_residual, reports[k].residual);
  }
  log.indicators = {compensated_sum(im), compensated_sum(il), compensated_sum(ie)};
  log.after = conserved_set(f, phi_, eq_);
  logs_.push_back(log);
  return log;
}

void SplittingDriver::advance(Distribution4D& f, double dt) {
  if (!f.all_finite()) throw std::invalid_argument("splitting: non-finite distribution on entry");
  const double h = 0.5 * dt;
  // (1) potential from f^n
  solve_potential(f);
  // (2) predictor on a copy of f^n
  Distribution4D half = f;
  substep_a(half, h);
  substep_b(half, h);
  substep_c(half, h);
  // (3) potential from the predictor
  solve_potential(half);
  // (4) corrector from f^n
  substep_a(f, h);
  substep_b(f, h);
  substep_c(f, dt);
  substep_b(f, h);
  substep_a(f, h);
}

}  // namespace gksplit
