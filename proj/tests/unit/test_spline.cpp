#include <cmath>

#include "doctest.h"
#include "gksplit/semi_lagrangian.hpp"
#include "gksplit/spline.hpp"
#include "support/oracles.hpp"

using namespace gksplit;

TEST_CASE("clamped spline reproduces a cubic") {
  auto p = [](double x) { return 2.0 - 3.0 * x + 0.5 * x * x + 0.75 * x * x * x; };
  auto dp = [](double x) { return -3.0 + x + 2.25 * x * x; };
  const Grid1D g(11, -2.0, 3.0, false);
  Spline1D s(g, SplineEnd::Clamped);
  std::vector<double> y(g.size());
  for (std::size_t i = 0; i < y.size(); ++i) y[i] = p(g.node(static_cast<std::ptrdiff_t>(i)));
  s.fit(y, dp(-2.0), dp(3.0));
  double scale = 0.0;
  for (double x : y) scale = std::max(scale, std::fabs(x));
  for (double x : oracle::uniform(200, -2.0, 3.0, 11)) {
    CHECK(std::fabs(s(x) - p(x)) <= 1e-12 * scale);
    CHECK(std::fabs(s.derivative(x) - dp(x)) <= 1e-11 * scale);
  }
}

TEST_CASE("natural spline reproduces straight lines and has zero end curvature") {
  const Grid1D g(9, 0.0, 1.0, false);
  Spline1D s(g, SplineEnd::Natural);
  std::vector<double> y(g.size());
  for (std::size_t i = 0; i < y.size(); ++i) y[i] = 4.0 - 2.0 * g.node(static_cast<std::ptrdiff_t>(i));
  s.fit(y);
  for (double x : {0.0, 0.13, 0.5, 0.999}) CHECK(s(x) == doctest::Approx(4.0 - 2.0 * x).epsilon(1e-14));
  const auto r = oracle::uniform(9, -1, 1, 2);
  s.fit(r);
  CHECK(s.second_derivatives().front() == 0.0);
  CHECK(s.second_derivatives().back() == 0.0);
}

TEST_CASE("splines interpolate node values") {
  const auto y = oracle::uniform(32, -100.0, 100.0, 5);
  for (bool periodic : {true, false}) {
    const Grid1D g(32, 0.5, 4.0, periodic);
    Spline1D s(g, periodic ? SplineEnd::Periodic : SplineEnd::Natural);
    s.fit(y);
    for (std::size_t i = 0; i < y.size(); ++i)
      CHECK(std::fabs(s(g.node(static_cast<std::ptrdiff_t>(i))) - y[i]) <= 1e-12 * 100.0);
  }
  CHECK_THROWS_AS(Spline1D(Grid1D(8, 0, 1, false), SplineEnd::Periodic), std::invalid_argument);
  CHECK_THROWS_AS(Spline1D(Grid1D(8, 0, 1, true), SplineEnd::Natural), std::invalid_argument);
}

TEST_CASE("periodic spline is C1 across the seam and wraps") {
  const Grid1D g(16, 0.0, 2.0 * M_PI, true);
  Spline1D s(g, SplineEnd::Periodic);
  s.fit(oracle::uniform(16, -1, 1, 8));
  const double L = 2.0 * M_PI, eps = 1e-9;
  CHECK(std::fabs(s(L - eps) - s(eps)) < 1e-7);
  CHECK(std::fabs(s.derivative(L - eps) - s.derivative(eps)) < 1e-6);
  CHECK(s(1.3 + 3.0 * L) == doctest::Approx(s(1.3)).epsilon(1e-12));
  CHECK(s(1.3 - 2.0 * L) == doctest::Approx(s(1.3)).epsilon(1e-12));
}

TEST_CASE("periodic spline converges at fourth order on a smooth function") {
  std::vector<double> h, e;
  for (std::size_t n : {16u, 32u, 64u, 128u}) {
    const Grid1D g(n, 0.0, 2.0 * M_PI, true);
    Spline1D s(g, SplineEnd::Periodic);
    std::vector<double> y(n);
    for (std::size_t i = 0; i < n; ++i) y[i] = std::exp(std::sin(g.node(static_cast<std::ptrdiff_t>(i))));
    s.fit(y);
    double err = 0.0;
    for (double x : oracle::uniform(500, 0.0, 2.0 * M_PI, 1)) err = std::max(err, std::fabs(s(x) - std::exp(std::sin(x))));
    h.push_back(g.spacing());
    e.push_back(err);
  }
  CHECK(oracle::loglog_slope(h, e) == doctest::Approx(4.0).epsilon(0.05));
}

TEST_CASE("2D spline matches nested 1D periodic splines") {
  const Grid1D gt(12, 0.0, 2.0 * M_PI, true), gz(10, 0.0, 50.0, true);
  const auto f = oracle::uniform(gt.size() * gz.size(), -1, 1, 21);
  Spline2D s(gt, gz);
  s.fit(f);
  for (std::size_t i = 0; i < gt.size(); ++i)
    for (std::size_t j = 0; j < gz.size(); ++j)
      CHECK(std::fabs(s(gt.node(static_cast<std::ptrdiff_t>(i)), gz.node(static_cast<std::ptrdiff_t>(j))) -
                      f[i * gz.size() + j]) <= 1e-12);

  Spline1D sz(gz, SplineEnd::Periodic), st(gt, SplineEnd::Periodic);
  const auto th = oracle::uniform(30, -1.0, 8.0, 22);
  const auto zz = oracle::uniform(30, -10.0, 60.0, 23);
  for (std::size_t p = 0; p < th.size(); ++p) {
    std::vector<double> col(gt.size());
    for (std::size_t i = 0; i < gt.size(); ++i) {
      sz.fit(std::span<const double>(f).subspan(i * gz.size(), gz.size()));
      col[i] = sz(zz[p]);
    }
    st.fit(col);
    CHECK(std::fabs(s(th[p], zz[p]) - st(th[p])) <= 1e-12);
  }
}

TEST_CASE("flux-surface advection") {
  const double Lz = 2.0 * M_PI * 10.0;
  const Grid1D gt(8, 0.0, 2.0 * M_PI, true);
  const FieldLine b{};

  SUBCASE("zero velocity and one-cell shifts") {
    const Grid1D gz(16, 0.0, Lz, true);
    const auto f0 = oracle::uniform(gt.size() * gz.size(), -1, 1, 31);
    FluxSurfaceAdvector adv(gt, gz);
    auto f = f0;
    adv.advect(f, 2.0, 0.0, 1.0, b);
    for (std::size_t k = 0; k < f.size(); ++k) CHECK(std::fabs(f[k] - f0[k]) <= 1e-12);
    // v dt = dz: every node takes its left neighbour's value
    adv.advect(f, 2.0, 2.0, 0.5 * gz.spacing(), b);
    double mass0 = 0, mass1 = 0;
    for (std::size_t i = 0; i < gt.size(); ++i)
      for (std::size_t j = 0; j < gz.size(); ++j) {
        CHECK(std::fabs(f[i * 16 + j] - f0[i * 16 + (j + 15) % 16]) <= 1e-12);
        mass0 += f0[i * 16 + j];
        mass1 += f[i * 16 + j];
      }
    CHECK(std::fabs(mass1 - mass0) <= 1e-12);
  }

  SUBCASE("shift of a sine converges at third order or better") {
    std::vector<double> h, e;
    for (std::size_t nz : {8u, 16u, 32u, 64u}) {
      const Grid1D gz(nz, 0.0, Lz, true);
      FluxSurfaceAdvector adv(gt, gz);
      std::vector<double> f(gt.size() * nz);
      for (std::size_t i = 0; i < gt.size(); ++i)
        for (std::size_t j = 0; j < nz; ++j) f[i * nz + j] = std::sin(2.0 * M_PI * gz.node(static_cast<std::ptrdiff_t>(j)) / Lz);
      const double v = 1.7, dt = 2.3;
      adv.advect(f, 3.0, v, dt, b);
      double err = 0.0;
      for (std::size_t i = 0; i < gt.size(); ++i)
        for (std::size_t j = 0; j < nz; ++j)
          err = std::max(err, std::fabs(f[i * nz + j] - std::sin(2.0 * M_PI * (gz.node(static_cast<std::ptrdiff_t>(j)) - v * dt) / Lz)));
      h.push_back(gz.spacing());
      e.push_back(err);
    }
    CHECK(oracle::loglog_slope(h, e) >= 3.0);
  }

  SUBCASE("theta component uses the arc-length shift") {
    const Grid1D gtf(64, 0.0, 2.0 * M_PI, true), gz(8, 0.0, Lz, true);
    FluxSurfaceAdvector adv(gtf, gz);
    const FieldLine tilted = FieldLine::from_iota(0.5);
    CHECK(tilted.b_theta * tilted.b_theta + tilted.b_z * tilted.b_z == doctest::Approx(1.0).epsilon(1e-15));
    std::vector<double> f(64 * 8);
    for (std::size_t i = 0; i < 64; ++i)
      for (std::size_t j = 0; j < 8; ++j) f[i * 8 + j] = std::cos(gtf.node(static_cast<std::ptrdiff_t>(i)));
    const double r = 2.5, v = 1.0, dt = 0.8;
    adv.advect(f, r, v, dt, tilted);
    for (std::size_t i = 0; i < 64; ++i)
      CHECK(std::fabs(f[i * 8 + 3] - std::cos(gtf.node(static_cast<std::ptrdiff_t>(i)) - v * tilted.b_theta * dt / r)) < 1e-5);
  }

  SUBCASE("forward then backward is close to the identity") {
    std::vector<double> e;
    for (std::size_t nz : {16u, 32u, 64u}) {
      const Grid1D gz(nz, 0.0, Lz, true);
      FluxSurfaceAdvector adv(gt, gz);
      std::vector<double> f(gt.size() * nz);
      for (std::size_t k = 0; k < f.size(); ++k) f[k] = std::cos(2.0 * M_PI * gz.node(static_cast<std::ptrdiff_t>(k % nz)) / Lz);
      const auto f0 = f;
      adv.advect(f, 1.0, 1.3, 3.1, b);
      adv.advect(f, 1.0, 1.3, -3.1, b);
      double err = 0.0;
      for (std::size_t k = 0; k < f.size(); ++k) err = std::max(err, std::fabs(f[k] - f0[k]));
      e.push_back(err);
    }
    CHECK(e[1] < e[0]);
    CHECK(e[2] < e[1]);
    CHECK(e[2] > 0.0);
  }
}

TEST_CASE("v-parallel advection") {
  const double vmax = 7.0;
  auto gauss = [](double v) { return std::exp(-0.5 * v * v); };

  SUBCASE("zero gradient is the identity") {
    const Grid1D gv(32, -vmax, vmax, false);
    VparAdvector adv(gv);
    auto line = oracle::uniform(32, 0, 1, 3);
    const auto before = line;
    adv.advect(line, 0.0, 1.0, [](double) { return 0.0; });
    for (std::size_t k = 0; k < line.size(); ++k) CHECK(std::fabs(line[k] - before[k]) <= 1e-12);
  }

  SUBCASE("gaussian shift converges at third order or better") {
    std::vector<double> h, e;
    for (std::size_t n : {16u, 32u, 64u, 128u}) {
      const Grid1D gv(n + 1, -vmax, vmax, false);
      VparAdvector adv(gv);
      std::vector<double> line(gv.size());
      for (std::size_t k = 0; k < line.size(); ++k) line[k] = gauss(gv.node(static_cast<std::ptrdiff_t>(k)));
      const double grad = 0.37, dt = 1.1;
      adv.advect(line, grad, dt, gauss);
      double err = 0.0;
      for (std::size_t k = 0; k < line.size(); ++k)
        err = std::max(err, std::fabs(line[k] - gauss(gv.node(static_cast<std::ptrdiff_t>(k)) + grad * dt)));
      h.push_back(gv.spacing());
      e.push_back(err);
    }
    CHECK(oracle::loglog_slope(h, e) >= 3.0);
  }

  SUBCASE("feet beyond the grid take the supplied values") {
    const Grid1D gv(16, -vmax, vmax, false);
    VparAdvector adv(gv);
    std::vector<double> line(16, 1.0);
    adv.advect(line, 2.5 * gv.spacing(), 1.0, [](double v) { return 100.0 + v; });
    CHECK(line[15] == doctest::Approx(100.0 + vmax + 2.5 * gv.spacing()));
    CHECK(line[14] == doctest::Approx(100.0 + vmax + 1.5 * gv.spacing()));
    CHECK(line[12] == doctest::Approx(1.0));
  }
}

TEST_CASE("parallel gradient") {
  const Grid1D gr(4, 1.0, 2.0, false), gt(16, 0.0, 2.0 * M_PI, true);

  SUBCASE("radial-only potential has zero gradient") {
    const Grid1D gz(8, 0.0, 10.0, true);
    Field3D phi(gr, gt, gz);
    for (std::size_t i = 0; i < 4; ++i)
      for (std::size_t j = 0; j < 16; ++j)
        for (std::size_t k = 0; k < 8; ++k) phi(i, j, k) = std::exp(gr.node(static_cast<std::ptrdiff_t>(i)));
    const Field3D g = grad_parallel(phi, FieldLine::from_iota(0.3));
    for (double v : g.values()) CHECK(std::fabs(v) <= 1e-13);
  }

  SUBCASE("sine in z is differentiated at fourth order") {
    const double Lz = 100.0;
    std::vector<double> h, e;
    for (std::size_t nz : {8u, 16u, 32u, 64u}) {
      const Grid1D gz(nz, 0.0, Lz, true);
      Field3D phi(gr, gt, gz);
      for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 16; ++j)
          for (std::size_t k = 0; k < nz; ++k) phi(i, j, k) = std::sin(2.0 * M_PI * gz.node(static_cast<std::ptrdiff_t>(k)) / Lz);
      const Field3D g = grad_parallel(phi, FieldLine{});
      double err = 0.0;
      for (std::size_t k = 0; k < nz; ++k)
        err = std::max(err, std::fabs(g(2, 5, k) - 2.0 * M_PI / Lz * std::cos(2.0 * M_PI * gz.node(static_cast<std::ptrdiff_t>(k)) / Lz)));
      h.push_back(gz.spacing());
      e.push_back(err);
    }
    CHECK(oracle::loglog_slope(h, e) == doctest::Approx(4.0).epsilon(0.05));
  }

  SUBCASE("theta component carries 1/r and the result is linear") {
    const Grid1D gz(8, 0.0, 10.0, true), gtf(128, 0.0, 2.0 * M_PI, true);
    Field3D a(gr, gtf, gz), b(gr, gtf, gz), sum(gr, gtf, gz);
    const auto ra = oracle::uniform(a.size(), -1, 1, 1), rb = oracle::uniform(a.size(), -1, 1, 2);
    for (std::size_t k = 0; k < a.size(); ++k) {
      a.values()[k] = ra[k];
      b.values()[k] = rb[k];
      sum.values()[k] = 2.0 * ra[k] - 3.0 * rb[k];
    }
    const FieldLine line = FieldLine::from_iota(0.4);
    const Field3D ga = grad_parallel(a, line), gb = grad_parallel(b, line), gs = grad_parallel(sum, line);
    for (std::size_t k = 0; k < a.size(); ++k)
      CHECK(std::fabs(gs.values()[k] - (2.0 * ga.values()[k] - 3.0 * gb.values()[k])) <= 1e-12);

    Field3D s(gr, gtf, gz);
    for (std::size_t i = 0; i < 4; ++i)
      for (std::size_t j = 0; j < 128; ++j)
        for (std::size_t k = 0; k < 8; ++k) s(i, j, k) = std::sin(gtf.node(static_cast<std::ptrdiff_t>(j)));
    const Field3D gsn = grad_parallel(s, line);
    const double r = gr.node(3), th = gtf.node(17);
    CHECK(gsn(3, 17, 0) == doctest::Approx(line.b_theta * std::cos(th) / r).epsilon(1e-6));
  }
}

TEST_CASE("whole-distribution SL steps act slice by slice") {
  const PhaseGrid4D g = make_phase_grid(4, 8, 8, 9, 1.0, 2.0, 5.0, 4.0);
  Distribution4D f(g);
  const auto r = oracle::uniform(f.size(), 0, 1, 9);
  std::copy(r.begin(), r.end(), f.values().begin());
  Distribution4D ref = f;

  advect_flux_surfaces(f, 0.7, FieldLine{});
  FluxSurfaceAdvector adv(g.theta, g.z);
  std::vector<double> buf(64);
  for (std::size_t ir = 0; ir < 4; ++ir)
    for (std::size_t iv = 0; iv < 9; ++iv) {
      auto view = ref.flux_surface_slice(ir, iv);
      view.copy_to(buf);
      adv.advect(buf, g.r.node(static_cast<std::ptrdiff_t>(ir)), g.vpar.node(static_cast<std::ptrdiff_t>(iv)), 0.7, FieldLine{});
      view.copy_from(buf);
    }
  for (std::size_t k = 0; k < f.size(); ++k) CHECK(f.values()[k] == ref.values()[k]);

  ModelParams mp;
  mp.r_min = 1.0;
  mp.r_max = 2.0;
  const Equilibrium eq = make_equilibrium(mp);
  Field3D grad(g, 0.0);
  advect_vpar(f, grad, 0.7, eq);
  for (std::size_t k = 0; k < f.size(); ++k) CHECK(f.values()[k] == ref.values()[k]);
  for (double& v : grad.values()) v = 2.0;
  advect_vpar(f, grad, 1.0, eq, VparOutside::Zero);
  CHECK(f(1, 2, 3, 8) == 0.0);
  CHECK(f(1, 2, 3, 7) == 0.0);
}
