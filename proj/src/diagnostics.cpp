#include "gksplit/diagnostics.hpp"

#include <cmath>
#include <iomanip>
#include <ostream>
#include <stdexcept>

namespace gksplit {

ConservedSet conserved_set(const Distribution4D& f, const Field3D& phi, const Equilibrium& eq) {
  const PhaseGrid4D& g = f.grid();
  const std::size_t nr = g.r.size(), nt = g.theta.size(), nz = g.z.size(), nv = g.vpar.size();
  if (phi.size() != nr * nt * nz) throw std::invalid_argument("conserved_set: potential shape mismatch");
  const double cell = g.r.spacing() * g.theta.spacing() * g.z.spacing() * g.vpar.spacing();
  std::vector<double> pm(nr), pl(nr), pe(nr), pk(nr);
#pragma omp parallel for schedule(static)
  for (std::size_t ir = 0; ir < nr; ++ir) {
    const double r = g.r.node(static_cast<std::ptrdiff_t>(ir));
    std::vector<double> feq_v2(nv), v2(nv);
    for (std::size_t iv = 0; iv < nv; ++iv) {
      const double v = g.vpar.node(static_cast<std::ptrdiff_t>(iv));
      v2[iv] = v * v;
      feq_v2[iv] = eq.feq(r, v) * v2[iv];
    }
    std::vector<double> m, l, e, k;
    m.reserve(nt * nz * nv);
    l.reserve(nt * nz * nv);
    e.reserve(nt * nz * nv);
    k.reserve(nt * nz * nv);
    for (std::size_t it = 0; it < nt; ++it)
      for (std::size_t iz = 0; iz < nz; ++iz) {
        const double p = phi(ir, it, iz);
        const auto line = f.vpar_line(ir, it, iz);
        for (std::size_t iv = 0; iv < nv; ++iv) {
          const double x = line[iv];
          m.push_back(x);
          l.push_back(x * x);
          e.push_back(p * x);
          k.push_back(x * v2[iv] - feq_v2[iv]);
        }
      }
    const double w = r * cell;
    pm[ir] = w * compensated_sum(m);
    pl[ir] = w * compensated_sum(l);
    pe[ir] = w * compensated_sum(e);
    pk[ir] = 0.5 * w * compensated_sum(k);
  }
  return {compensated_sum(pm), compensated_sum(pl), compensated_sum(pe), compensated_sum(pk)};
}

double phi_l2(const Field3D& phi) {
  const std::size_t nr = phi.r().size(), nt = phi.theta().size(), nz = phi.z().size();
  const double cell = phi.r().spacing() * phi.theta().spacing() * phi.z().spacing();
  std::vector<double> t(phi.size());
  for (std::size_t i = 0; i < nr; ++i) {
    const double w = phi.r().node(static_cast<std::ptrdiff_t>(i)) * cell;
    for (std::size_t j = 0; j < nt; ++j)
      for (std::size_t k = 0; k < nz; ++k) {
        const double p = phi(i, j, k);
        t[phi.index(i, j, k)] = p * p * w;
      }
  }
  return std::sqrt(compensated_sum(t));
}

double get(const ConservedSet& c, Quantity q) {
  switch (q) {
    case Quantity::Mass: return c.mass;
    case Quantity::L2: return c.l2;
    case Quantity::EPot: return c.e_pot;
    case Quantity::EKin: return c.e_kin;
  }
  return 0.0;
}

RelativeError relative_error(double q0, double q) {
  if (q0 == 0.0) return {std::fabs(q - q0), true};
  return {std::fabs(q - q0) / std::fabs(q0), false};
}

GrowthFit fit_growth_rate(std::span<const double> t, std::span<const double> y) {
  const std::size_t n = t.size();
  if (y.size() != n) throw std::invalid_argument("growth fit: length mismatch");
  if (n < 10) throw std::invalid_argument("growth fit: need at least 10 samples");
  double st = 0, sy = 0;
  std::vector<double> ly(n);
  for (std::size_t k = 0; k < n; ++k) {
    if (!(y[k] > 0.0)) throw std::invalid_argument("growth fit: samples must be positive");
    ly[k] = std::log(y[k]);
    st += t[k];
    sy += ly[k];
  }
  const double tm = st / static_cast<double>(n), ym = sy / static_cast<double>(n);
  double sxx = 0, sxy = 0;
  for (std::size_t k = 0; k < n; ++k) {
    sxx += (t[k] - tm) * (t[k] - tm);
    sxy += (t[k] - tm) * (ly[k] - ym);
  }
  if (sxx == 0.0) throw std::invalid_argument("growth fit: all samples at the same time");
  const double rate = sxy / sxx;
  return {std::exp(ym - rate * tm), rate};
}

void DiagnosticsSeries::append(const DiagnosticsRow& row) {
  if (!rows_.empty() && row.t < rows_.back().t) throw std::invalid_argument("diagnostics: time went backwards");
  rows_.push_back(row);
}

RelativeError DiagnosticsSeries::relative_error(Quantity q, std::size_t k) const {
  if (k >= rows_.size()) throw std::out_of_range("diagnostics: row index");
  return gksplit::relative_error(get(rows_.front().conserved, q), get(rows_[k].conserved, q));
}

const char* DiagnosticsSeries::csv_header() {
  return "step,t,mass,l2,e_pot,e_kin,d_mass_pol,d_l2_pol,d_epot_pol,d_ekin_pol,ind_mass,ind_l2,ind_energy,"
         "phi_l2,cfl,cn_iters,cn_residual";
}

void DiagnosticsSeries::write_csv_row(std::ostream& os, const DiagnosticsRow& r) {
  const auto flags = os.flags();
  const auto prec = os.precision();
  os << std::setprecision(17);
  os << r.step << ',' << r.t << ',' << r.conserved.mass << ',' << r.conserved.l2 << ',' << r.conserved.e_pot << ','
     << r.conserved.e_kin << ',' << r.d_pol.mass << ',' << r.d_pol.l2 << ',' << r.d_pol.e_pot << ','
     << r.d_pol.e_kin << ',' << r.indicators.mass << ',' << r.indicators.l2 << ',' << r.indicators.energy << ','
     << r.phi_l2 << ',' << r.cfl << ',' << r.cn_iters << ',' << r.cn_residual << '\n';
  os.flags(flags);
  os.precision(prec);
}

void DiagnosticsSeries::write_csv(std::ostream& os) const {
  os << csv_header() << '\n';
  for (const auto& r : rows_) write_csv_row(os, r);
}

}  // namespace gksplit
