#include "gksplit/semi_lagrangian.hpp"

#include <cmath>
#include <stdexcept>

namespace gksplit {

FieldLine FieldLine::from_iota(double iota) {
  const double norm = std::hypot(iota, 1.0);
  return {iota / norm, 1.0 / norm};
}

FluxSurfaceAdvector::FluxSurfaceAdvector(const Grid1D& theta, const Grid1D& z) : spline_(theta, z) {}

void FluxSurfaceAdvector::advect(std::span<double> slice, double r, double vpar, double dt,
                                 const FieldLine& line) {
  const Grid1D& gt = spline_.theta();
  const Grid1D& gz = spline_.z();
  const double dth = vpar * line.b_theta * dt / r;
  const double dz = vpar * line.b_z * dt;
  if (dth == 0.0 && dz == 0.0) return;
  spline_.fit(slice);
  const std::size_t nz = gz.size();
  for (std::size_t i = 0; i < gt.size(); ++i) {
    const double th = gt.node(static_cast<std::ptrdiff_t>(i)) - dth;
    for (std::size_t j = 0; j < nz; ++j)
      slice[i * nz + j] = spline_(th, gz.node(static_cast<std::ptrdiff_t>(j)) - dz);
  }
}

VparAdvector::VparAdvector(const Grid1D& v) : spline_(v, SplineEnd::Natural), out_(v.size()) {}

void VparAdvector::advect(std::span<double> line, double grad_par_phi, double dt,
                          const std::function<double(double)>& outside) {
  const double shift = grad_par_phi * dt;
  if (shift == 0.0) return;
  const Grid1D& g = spline_.knots();
  spline_.fit(line);
  const double lo = g.start(), hi = g.stop();
  for (std::size_t k = 0; k < g.size(); ++k) {
    const double foot = g.node(static_cast<std::ptrdiff_t>(k)) + shift;
    out_[k] = (foot < lo || foot > hi) ? outside(foot) : spline_(foot);
  }
  std::copy(out_.begin(), out_.end(), line.begin());
}

Field3D grad_parallel(const Field3D& phi, const FieldLine& line) {
  const std::size_t nr = phi.r().size(), nt = phi.theta().size(), nz = phi.z().size();
  if (!phi.theta().periodic() || !phi.z().periodic())
    throw std::invalid_argument("grad_parallel: theta and z must be periodic");
  Field3D out(phi.r(), phi.theta(), phi.z());
  const double ct = line.b_theta / (12.0 * phi.theta().spacing());
  const double cz = line.b_z / (12.0 * phi.z().spacing());
  auto d4 = [](double m2, double m1, double p1, double p2) { return m2 - 8.0 * m1 + 8.0 * p1 - p2; };
#pragma omp parallel for schedule(static)
  for (std::size_t i = 0; i < nr; ++i) {
    const double inv_r = 1.0 / phi.r().node(static_cast<std::ptrdiff_t>(i));
    for (std::size_t j = 0; j < nt; ++j)
      for (std::size_t k = 0; k < nz; ++k) {
        double g = 0.0;
        if (ct != 0.0)
          g += ct * inv_r *
               d4(phi(i, (j + nt - 2) % nt, k), phi(i, (j + nt - 1) % nt, k), phi(i, (j + 1) % nt, k),
                  phi(i, (j + 2) % nt, k));
        if (cz != 0.0)
          g += cz * d4(phi(i, j, (k + nz - 2) % nz), phi(i, j, (k + nz - 1) % nz), phi(i, j, (k + 1) % nz),
                       phi(i, j, (k + 2) % nz));
        out(i, j, k) = g;
      }
  }
  return out;
}

void advect_flux_surfaces(Distribution4D& f, double dt, const FieldLine& line) {
  const PhaseGrid4D& g = f.grid();
  const std::size_t nr = g.r.size(), nv = g.vpar.size(), nt = g.theta.size(), nz = g.z.size();
#pragma omp parallel
  {
    FluxSurfaceAdvector adv(g.theta, g.z);
    std::vector<double> buf(nt * nz);
#pragma omp for collapse(2) schedule(static)
    for (std::size_t ir = 0; ir < nr; ++ir)
      for (std::size_t iv = 0; iv < nv; ++iv) {
        auto view = f.flux_surface_slice(ir, iv);
        view.copy_to(buf);
        adv.advect(buf, g.r.node(static_cast<std::ptrdiff_t>(ir)), g.vpar.node(static_cast<std::ptrdiff_t>(iv)),
                   dt, line);
        view.copy_from(buf);
      }
  }
}

void advect_vpar(Distribution4D& f, const Field3D& grad_par_phi, double dt, const Equilibrium& eq,
                 VparOutside outside) {
  const PhaseGrid4D& g = f.grid();
  const std::size_t nr = g.r.size(), nt = g.theta.size(), nz = g.z.size();
  if (grad_par_phi.size() != nr * nt * nz) throw std::invalid_argument("advect_vpar: potential shape mismatch");
#pragma omp parallel
  {
    VparAdvector adv(g.vpar);
#pragma omp for schedule(static)
    for (std::size_t ir = 0; ir < nr; ++ir) {
      const double r = g.r.node(static_cast<std::ptrdiff_t>(ir));
      const std::function<double(double)> fill =
          outside == VparOutside::Equilibrium ? std::function<double(double)>([&eq, r](double v) { return eq.feq(r, v); })
                                              : std::function<double(double)>([](double) { return 0.0; });
      for (std::size_t it = 0; it < nt; ++it)
        for (std::size_t iz = 0; iz < nz; ++iz)
          adv.advect(f.vpar_line(ir, it, iz), grad_par_phi(ir, it, iz), dt, fill);
    }
  }
}

}  // namespace gksplit
