#include <cmath>
#include <random>
#include <sstream>

#include "doctest.h"
#include "gksplit/diagnostics.hpp"
#include "support/oracles.hpp"

using namespace gksplit;

namespace {

struct Setup {
  ModelParams mp;
  PhaseGrid4D g;
  Equilibrium eq;
  Setup() {
    mp.r_min = 1.0;
    mp.r_max = 4.0;
    g = make_phase_grid(6, 8, 4, 10, mp.r_min, mp.r_max, 20.0, 5.0);
    eq = make_equilibrium(mp);
  }
  double w4(std::size_t ir) const {
    return g.r.node(static_cast<std::ptrdiff_t>(ir)) * g.r.spacing() * g.theta.spacing() * g.z.spacing() *
           g.vpar.spacing();
  }
};

}  // namespace

TEST_CASE("conserved set of the zero distribution") {
  const Setup s;
  const Distribution4D f(s.g);
  Field3D phi(s.g);
  const auto r = oracle::uniform(phi.size(), -1, 1, 4);
  std::copy(r.begin(), r.end(), phi.values().begin());
  const ConservedSet c = conserved_set(f, phi, s.eq);
  CHECK(c.mass == 0.0);
  CHECK(c.l2 == 0.0);
  CHECK(c.e_pot == 0.0);
  std::vector<double> terms;
  for (std::size_t ir = 0; ir < s.g.r.size(); ++ir)
    for (std::size_t k = 0; k < s.g.theta.size() * s.g.z.size(); ++k)
      for (std::size_t iv = 0; iv < s.g.vpar.size(); ++iv) {
        const double v = s.g.vpar.node(static_cast<std::ptrdiff_t>(iv));
        terms.push_back(-0.5 * s.eq.feq(s.g.r.node(static_cast<std::ptrdiff_t>(ir)), v) * v * v * s.w4(ir));
      }
  CHECK(c.e_kin == doctest::Approx(oracle::pairwise_sum(terms)).epsilon(1e-13));
}

TEST_CASE("conserved set: equilibrium, homogeneity and direct sums") {
  const Setup s;
  Distribution4D f(s.g);
  for (std::size_t ir = 0; ir < 6; ++ir)
    for (std::size_t it = 0; it < 8; ++it)
      for (std::size_t iz = 0; iz < 4; ++iz)
        for (std::size_t iv = 0; iv < 10; ++iv)
          f(ir, it, iz, iv) = s.eq.feq(s.g.r.node(static_cast<std::ptrdiff_t>(ir)), s.g.vpar.node(static_cast<std::ptrdiff_t>(iv)));
  Field3D phi(s.g);
  const auto r = oracle::uniform(phi.size(), -1, 1, 5);
  std::copy(r.begin(), r.end(), phi.values().begin());
  CHECK(conserved_set(f, phi, s.eq).e_kin == 0.0);

  const auto u = oracle::uniform(f.size(), 0, 1, 6);
  std::copy(u.begin(), u.end(), f.values().begin());
  const ConservedSet c1 = conserved_set(f, phi, s.eq);
  std::vector<double> m, l, e;
  for (std::size_t ir = 0; ir < 6; ++ir)
    for (std::size_t it = 0; it < 8; ++it)
      for (std::size_t iz = 0; iz < 4; ++iz)
        for (std::size_t iv = 0; iv < 10; ++iv) {
          const double x = f(ir, it, iz, iv);
          m.push_back(x * s.w4(ir));
          l.push_back(x * x * s.w4(ir));
          e.push_back(phi(ir, it, iz) * x * s.w4(ir));
        }
  CHECK(c1.mass == doctest::Approx(oracle::pairwise_sum(m)).epsilon(1e-13));
  CHECK(c1.l2 == doctest::Approx(oracle::pairwise_sum(l)).epsilon(1e-13));
  CHECK(c1.e_pot == doctest::Approx(oracle::pairwise_sum(e)).epsilon(1e-12));

  for (double& x : f.values()) x *= 2.0;
  const ConservedSet c2 = conserved_set(f, phi, s.eq);
  CHECK(c2.mass == doctest::Approx(2.0 * c1.mass).epsilon(1e-14));
  CHECK(c2.e_pot == doctest::Approx(2.0 * c1.e_pot).epsilon(1e-13));
  CHECK(c2.l2 == doctest::Approx(4.0 * c1.l2).epsilon(1e-14));
  // bit-repeatable
  const ConservedSet c3 = conserved_set(f, phi, s.eq);
  CHECK(c3.mass == c2.mass);
  CHECK(c3.e_kin == c2.e_kin);
}

TEST_CASE("phi norm") {
  const Setup s;
  Field3D phi(s.g, 2.0);
  double area = 0.0;
  for (std::size_t ir = 0; ir < 6; ++ir) area += s.g.r.node(static_cast<std::ptrdiff_t>(ir)) * s.g.r.spacing();
  const double want = 2.0 * std::sqrt(area * s.g.theta.spacing() * 8 * s.g.z.spacing() * 4);
  CHECK(phi_l2(phi) == doctest::Approx(want).epsilon(1e-14));
}

TEST_CASE("relative errors") {
  CHECK(relative_error(5.0, 5.0).value == 0.0);
  const RelativeError z = relative_error(0.0, 1e-3);
  CHECK(z.absolute);
  CHECK(z.value == 1e-3);

  DiagnosticsSeries s;
  const double q0 = 3.7;
  for (int k = 0; k <= 10; ++k) {
    DiagnosticsRow row;
    row.step = static_cast<std::size_t>(k);
    row.t = k;
    row.conserved.mass = q0 * (1.0 + 1e-9 * k);
    row.conserved.l2 = 2.0;
    s.append(row);
  }
  for (int k = 0; k <= 10; ++k) {
    CHECK(s.relative_error(Quantity::Mass, k).value == doctest::Approx(1e-9 * k).epsilon(1e-6));
    CHECK(s.relative_error(Quantity::L2, k).value == 0.0);
  }
  DiagnosticsRow back;
  back.t = 5.0;
  CHECK_THROWS_AS(s.append(back), std::invalid_argument);
}

TEST_CASE("growth-rate fit") {
  std::vector<double> t, y, c, noisy;
  std::mt19937_64 gen(7);
  std::normal_distribution<double> n01(0.0, 0.01);
  for (int k = 0; k < 200; ++k) {
    t.push_back(8.0 * k);
    y.push_back(4e-5 * std::exp(0.00354 * t.back()));
    c.push_back(0.25);
    noisy.push_back(y.back() * (1.0 + n01(gen)));
  }
  const GrowthFit exact = fit_growth_rate(t, y);
  CHECK(std::fabs(exact.rate - 0.00354) <= 1e-10);
  CHECK(exact.amplitude == doctest::Approx(4e-5).epsilon(1e-9));
  CHECK(fit_growth_rate(t, c).rate == doctest::Approx(0.0).scale(1.0).epsilon(1e-15));
  CHECK(fit_growth_rate(t, noisy).rate == doctest::Approx(0.00354).epsilon(0.05));

  CHECK_THROWS_AS(fit_growth_rate(std::span(t).first(9), std::span(y).first(9)), std::invalid_argument);
  y[3] = 0.0;
  CHECK_THROWS_AS(fit_growth_rate(t, y), std::invalid_argument);
}

TEST_CASE("diagnostics csv") {
  DiagnosticsSeries s;
  DiagnosticsRow row;
  row.step = 3;
  row.t = 24.0;
  row.conserved.mass = 0.1;
  row.conserved.l2 = 1.0 / 3.0;
  row.phi_l2 = 6.02214076e23;
  row.cn_iters = 12;
  s.append(row);
  std::ostringstream os;
  s.write_csv(os);
  std::istringstream is(os.str());
  std::string header, line;
  std::getline(is, header);
  std::getline(is, line);
  CHECK(header ==
        "step,t,mass,l2,e_pot,e_kin,d_mass_pol,d_l2_pol,d_epot_pol,d_ekin_pol,ind_mass,ind_l2,ind_energy,phi_l2,cfl,"
        "cn_iters,cn_residual");
  std::vector<std::string> cells;
  std::stringstream ls(line);
  for (std::string c; std::getline(ls, c, ',');) cells.push_back(c);
  REQUIRE(cells.size() == 17);
  CHECK(cells[0] == "3");
  CHECK(std::stod(cells[2]) == 0.1);
  CHECK(std::stod(cells[3]) == 1.0 / 3.0);
  CHECK(std::stod(cells[13]) == 6.02214076e23);
  CHECK(cells[15] == "12");
}
