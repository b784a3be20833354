#include "gksplit/qn_solver.hpp"

#include <fftw3.h>

#include <cmath>
#include <complex>
#include <stdexcept>

#include "fftw_lock.hpp"

namespace gksplit {

QNConfig QNConfig::from_equilibrium(const Grid1D& r, const Equilibrium& eq) {
  QNConfig c{r, {}, {}};
  for (std::size_t i = 0; i < r.size(); ++i) {
    const double ri = r.node(static_cast<std::ptrdiff_t>(i));
    c.te.push_back(eq.te(ri));
    c.dlog_n0.push_back(eq.n0.log_derivative(ri));
  }
  return c;
}

Field3D charge_density(const Distribution4D& f, const Equilibrium& eq) {
  const PhaseGrid4D& g = f.grid();
  const std::size_t nr = g.r.size(), nt = g.theta.size(), nz = g.z.size(), nv = g.vpar.size();
  Field3D rho(g);
  const double dv = g.vpar.spacing();
#pragma omp parallel for schedule(static)
  for (std::size_t ir = 0; ir < nr; ++ir) {
    const double r = g.r.node(static_cast<std::ptrdiff_t>(ir));
    std::vector<double> feq(nv);
    for (std::size_t iv = 0; iv < nv; ++iv) feq[iv] = eq.feq(r, g.vpar.node(static_cast<std::ptrdiff_t>(iv)));
    for (std::size_t it = 0; it < nt; ++it)
      for (std::size_t iz = 0; iz < nz; ++iz) {
        const auto line = f.vpar_line(ir, it, iz);
        double s = 0.5 * ((line[0] - feq[0]) + (line[nv - 1] - feq[nv - 1]));
        for (std::size_t iv = 1; iv + 1 < nv; ++iv) s += line[iv] - feq[iv];
        rho(ir, it, iz) = s * dv;
      }
  }
  return rho;
}

QNSolver::QNSolver(QNConfig cfg, std::size_t ntheta)
    : cfg_(std::move(cfg)), nr_(cfg_.r.size()), nt_(ntheta), nm_(ntheta / 2 + 1) {
  if (cfg_.te.size() != nr_ || cfg_.dlog_n0.size() != nr_)
    throw std::invalid_argument("QN: profile length does not match the radial grid");
  if (cfg_.r.periodic() || nr_ < 4) throw std::invalid_argument("QN: need a non-periodic radial grid with >= 4 nodes");
  for (double t : cfg_.te)
    if (!(t > 0.0)) throw std::invalid_argument("QN: Te must be positive");

  const double h = cfg_.r.spacing();
  auto coeffs = [&](std::size_t i, double m2, double& a, double& b, double& c) {
    const double r = cfg_.r.node(static_cast<std::ptrdiff_t>(i));
    const double p = 1.0 / r + cfg_.dlog_n0[i];
    a = -(1.0 / (h * h) - p / (2.0 * h));
    b = 2.0 / (h * h) + m2 / (r * r) + 1.0 / cfg_.te[i];
    c = -(1.0 / (h * h) + p / (2.0 * h));
  };
  for (std::size_t m = 0; m < nm_; ++m) {
    const double m2 = static_cast<double>(m * m);
    Tridiagonal t;
    if (m == 0) {
      // unknowns phi_0 .. phi_{N-2}; row 0 is the one-sided Neumann condition
      // -3 phi_0 + 4 phi_1 - phi_2 = 0 with phi_2 eliminated through row 1
      const std::size_t n = nr_ - 1;
      t = {std::vector<double>(n, 0.0), std::vector<double>(n, 0.0), std::vector<double>(n, 0.0)};
      double a, b, c;
      coeffs(1, m2, a, b, c);
      t.diag[0] = a - 3.0 * c;
      t.upper[0] = b + 4.0 * c;
      for (std::size_t k = 1; k < n; ++k) {
        coeffs(k, m2, a, b, c);
        t.lower[k] = a;
        t.diag[k] = b;
        t.upper[k] = k + 1 < n ? c : 0.0;
      }
    } else {
      // unknowns phi_1 .. phi_{N-2}
      const std::size_t n = nr_ - 2;
      t = {std::vector<double>(n, 0.0), std::vector<double>(n, 0.0), std::vector<double>(n, 0.0)};
      for (std::size_t k = 0; k < n; ++k) {
        double a, b, c;
        coeffs(k + 1, m2, a, b, c);
        t.lower[k] = k > 0 ? a : 0.0;
        t.diag[k] = b;
        t.upper[k] = k + 1 < n ? c : 0.0;
      }
    }
    dominant_.push_back(t.diagonally_dominant());
    factors_.emplace_back(t);
    systems_.push_back(std::move(t));
  }

  const int n = static_cast<int>(nt_);
  double* rb = fftw_alloc_real(nr_ * nt_);
  fftw_complex* cb = fftw_alloc_complex(nr_ * nm_);
  {
    std::lock_guard<std::mutex> lock(detail::fftw_planner_mutex());
    forward_ = fftw_plan_many_dft_r2c(1, &n, static_cast<int>(nr_), rb, nullptr, 1, n, cb, nullptr, 1,
                                      static_cast<int>(nm_), FFTW_ESTIMATE);
    backward_ = fftw_plan_many_dft_c2r(1, &n, static_cast<int>(nr_), cb, nullptr, 1, static_cast<int>(nm_), rb,
                                       nullptr, 1, n, FFTW_ESTIMATE);
  }
  fftw_free(rb);
  fftw_free(cb);
  if (!forward_ || !backward_) throw std::runtime_error("QN: FFTW planning failed");
}

QNSolver::~QNSolver() {
  std::lock_guard<std::mutex> lock(detail::fftw_planner_mutex());
  if (forward_) fftw_destroy_plan(static_cast<fftw_plan>(forward_));
  if (backward_) fftw_destroy_plan(static_cast<fftw_plan>(backward_));
}

bool QNSolver::all_diagonally_dominant() const {
  for (bool d : dominant_)
    if (!d) return false;
  return true;
}

void QNSolver::solve_slice(double* rb, void* spec, std::size_t iz, const Field3D& rho, Field3D& phi) const {
  auto* cb = static_cast<fftw_complex*>(spec);
  for (std::size_t i = 0; i < nr_; ++i)
    for (std::size_t j = 0; j < nt_; ++j) rb[i * nt_ + j] = rho(i, j, iz);
  fftw_execute_dft_r2c(static_cast<fftw_plan>(forward_), rb, cb);

  std::vector<double> re(nr_), im(nr_);
  for (std::size_t m = 0; m < nm_; ++m) {
    const std::size_t first = m == 0 ? 0 : 1;  // first unknown node
    const std::size_t n = systems_[m].size();
    for (std::size_t k = 0; k < n; ++k) {
      // m = 0, row 0 carries the rhs of node 1 (Neumann elimination)
      const std::size_t node = (m == 0 && k == 0) ? 1 : first + k;
      re[k] = cb[node * nm_ + m][0];
      im[k] = cb[node * nm_ + m][1];
    }
    factors_[m].solve(std::span<double>(re.data(), n));
    factors_[m].solve(std::span<double>(im.data(), n));
    for (std::size_t i = 0; i < nr_; ++i) cb[i * nm_ + m][0] = cb[i * nm_ + m][1] = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      cb[(first + k) * nm_ + m][0] = re[k];
      cb[(first + k) * nm_ + m][1] = im[k];
    }
  }
  // the imaginary parts of the real-valued modes (m = 0 and, for even N, the
  // Nyquist mode) are dropped by the inverse real transform
  fftw_execute_dft_c2r(static_cast<fftw_plan>(backward_), cb, rb);
  const double scale = 1.0 / static_cast<double>(nt_);
  for (std::size_t i = 0; i < nr_; ++i)
    for (std::size_t j = 0; j < nt_; ++j) phi(i, j, iz) = rb[i * nt_ + j] * scale;
}

Field3D QNSolver::solve(const Field3D& rho) const {
  if (rho.r().size() != nr_ || rho.theta().size() != nt_) throw std::invalid_argument("QN: density shape mismatch");
  if (!rho.all_finite()) throw std::invalid_argument("QN: non-finite charge density");
  Field3D phi(rho.r(), rho.theta(), rho.z());
  const std::size_t nz = rho.z().size();
#pragma omp parallel
  {
    double* rb = fftw_alloc_real(nr_ * nt_);
    fftw_complex* cb = fftw_alloc_complex(nr_ * nm_);
#pragma omp for schedule(static)
    for (std::size_t iz = 0; iz < nz; ++iz) solve_slice(rb, cb, iz, rho, phi);
    fftw_free(rb);
    fftw_free(cb);
  }
  return phi;
}

}  // namespace gksplit
