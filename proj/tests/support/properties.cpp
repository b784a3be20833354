#include "support/properties.hpp"

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>
#include <algorithm>
#include <cmath>
#include <numbers>

#include "gksplit/bracket.hpp"
#include "gksplit/qn_solver.hpp"
#include "gksplit/spline.hpp"
#include "gksplit/time_integration.hpp"
#include "support/oracles.hpp"

using namespace gksplit;

namespace props {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
const FieldBoundary kPeriodic{BoundaryRule::periodic(), BoundaryRule::periodic()};

BracketOperator rotation_operator(std::size_t n) {
  Grid2D g{Grid1D(n, 1.0, 2.0, true), Grid1D(n, 0.0, kTwoPi, true), Metric::Polar};
  const Field2D phi = Field2D::from_function(g, [](double r, double) { return -5.0 * r * r; });
  return BracketOperator(phi, StencilOrder::Order4, {kPeriodic, kPeriodic});
}

Eigen::MatrixXd dense(const CsrMatrix& m) {
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(m.rows(), m.cols());
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (std::size_t k = m.row_ptr()[r]; k < m.row_ptr()[r + 1]; ++k)
      d(r, m.col_idx()[k]) += m.values()[k];
  return d;
}

double weighted_norm2(std::span<const double> f, std::span<const double> w) {
  std::vector<double> t(f.size());
  for (std::size_t k = 0; k < f.size(); ++k) t[k] = w[k] * f[k] * f[k];
  return oracle::pairwise_sum(t);
}

}  // namespace

double linear_exactness_error() {
  double worst = 0.0;
  const double ax = 1.7, ay = -0.4, bx = 0.3, by = 2.2;
  const double expect = ax * by - ay * bx;
  auto fa = [=](double x, double y) { return ax * x + ay * y; };
  auto fb = [=](double x, double y) { return bx * x + by * y; };
  for (double dx : {0.1, 0.37})
    for (double dy : {0.1, 0.05, 0.23}) {
      const Grid2D g = make_cartesian_grid(Grid1D(9, 0.0, 8 * dx, false), Grid1D(9, 0.0, 8 * dy, false));
      const FieldBoundary ea{BoundaryRule::extrapolation(fa), BoundaryRule::extrapolation(fa)};
      const FieldBoundary eb{BoundaryRule::extrapolation(fb), BoundaryRule::extrapolation(fb)};
      const HaloField f(Field2D::from_function(g, fa), ea);
      const HaloField h(Field2D::from_function(g, fb), eb);
      for (std::ptrdiff_t i = 0; i < 9; ++i)
        for (std::ptrdiff_t j = 0; j < 9; ++j)
          for (double v : {eval_j1(f, h, i, j, dx, dy), eval_j2(f, h, i, j, dx, dy),
                           eval_jh(f, h, i, j, dx, dy, StencilOrder::Order2),
                           eval_jh(f, h, i, j, dx, dy, StencilOrder::Order4)})
            worst = std::max(worst, std::fabs(v - expect) / std::fabs(expect));
    }
  return worst;
}

double operator_loop_mismatch() {
  double worst = 0.0;
  for (auto order : {StencilOrder::Order2, StencilOrder::Order4}) {
    const Grid2D g = make_polar_grid(64, 64, 0.5, 3.0);
    Grid2D gp = g;
    gp.first = Grid1D(64, 0.5, 3.0, true);
    for (int variant = 0; variant < 3; ++variant) {
      const Grid2D grid = variant == 0 ? gp : g;
      BracketBoundary bc;
      auto supplier = [](double r, double t) { return std::exp(-r) * (2.0 + std::cos(t)); };
      const FieldBoundary dir{BoundaryRule::dirichlet(), BoundaryRule::periodic()};
      if (variant == 0) bc = {kPeriodic, kPeriodic};
      if (variant == 1) bc = {dir, dir};
      if (variant == 2) bc = {dir, {BoundaryRule::extrapolation(supplier), BoundaryRule::periodic()}};
      const Field2D phi(grid, oracle::uniform(grid.size(), -100, 100, 11));
      const Field2D f(grid, oracle::uniform(grid.size(), -100, 100, 12));
      const BracketOperator op(phi, order, bc);
      std::vector<double> out(grid.size());
      op.apply(f.values(), out);
      const HaloField hp(phi, bc.phi), hf(f, bc.f);
      double num = 0.0, den = 0.0;
      for (std::size_t i = 0; i < 64; ++i)
        for (std::size_t j = 0; j < 64; ++j) {
          const double ref =
              eval_jh(hp, hf, i, j, grid.first.spacing(), grid.second.spacing(), order) /
              grid.first.node(static_cast<std::ptrdiff_t>(i));
          num = std::max(num, std::fabs(out[i * 64 + j] - ref));
          den = std::max(den, std::fabs(ref));
        }
      worst = std::max(worst, num / den);
    }
  }
  return worst;
}

double skew_symmetry_defect() {
  const Grid2D g = make_polar_grid(48, 40, 1.0, 5.0);
  const FieldBoundary dir{BoundaryRule::dirichlet(), BoundaryRule::periodic()};
  const Field2D phi(g, oracle::uniform(g.size(), -1, 1, 21));
  const BracketOperator op(phi, StencilOrder::Order4, {dir, dir});
  const auto w = polar_weights(g);
  const auto a = oracle::uniform(g.size(), -1, 1, 22), b = oracle::uniform(g.size(), -1, 1, 23);
  std::vector<double> ja(g.size()), jb(g.size());
  op.apply(a, ja);
  op.apply(b, jb);
  double lhs = 0, rhs = 0, scale = 0;
  for (std::size_t k = 0; k < g.size(); ++k) {
    lhs += w[k] * a[k] * jb[k];
    rhs += w[k] * b[k] * ja[k];
    scale += std::fabs(w[k] * a[k] * jb[k]);
  }
  return std::fabs(lhs + rhs) / scale;
}

CnNorm cn_norm_conservation() {
  const BracketOperator op = rotation_operator(16);
  const auto w = polar_weights(op.grid());
  auto f = oracle::uniform(op.size(), -1, 1, 3);
  IntegratorConfig cfg;
  cfg.kind = IntegratorKind::CrankNicolson;
  CnNorm out{0.0, cfg.tolerance};
  for (double dt : {0.01, 0.05}) {
    for (int s = 0; s < 5; ++s) {
      const double before = weighted_norm2(f, w);
      cn_step(op, f, dt, cfg);
      out.max_relative_drift = std::max(out.max_relative_drift, std::fabs(weighted_norm2(f, w) - before) / before);
    }
  }
  return out;
}

double spline_cubic_error() {
  auto p = [](double x) { return 2.0 - 3.0 * x + 0.5 * x * x + 0.75 * x * x * x; };
  auto dp = [](double x) { return -3.0 + x + 2.25 * x * x; };
  const Grid1D g(11, -2.0, 3.0, false);
  Spline1D s(g, SplineEnd::Clamped);
  std::vector<double> y(g.size());
  for (std::size_t i = 0; i < y.size(); ++i) y[i] = p(g.node(static_cast<std::ptrdiff_t>(i)));
  s.fit(y, dp(-2.0), dp(3.0));
  double scale = 0.0, worst = 0.0;
  for (double v : y) scale = std::max(scale, std::fabs(v));
  for (double x : oracle::uniform(200, -2.0, 3.0, 11)) worst = std::max(worst, std::fabs(s(x) - p(x)));
  return worst / scale;
}

double qn_mms_order(int m) {
  // profiles chosen here, independent of the physics module
  auto te_of = [](double r) { return 1.0 + 0.3 * std::sin(r); };
  auto kappa_of = [](double r) { return -0.2 / std::pow(std::cosh(r - 2.0), 2); };
  const double a = 1.0, b = 4.0;
  auto g = [&](double r) { return std::pow((r - a) * (r - b), 2); };
  auto dg = [&](double r) { return 2.0 * (r - a) * (r - b) * (2.0 * r - a - b); };
  auto d2g = [&](double r) { return 2.0 * std::pow(2.0 * r - a - b, 2) + 4.0 * (r - a) * (r - b); };
  std::vector<double> h, e;
  for (std::size_t nr : {33u, 65u, 129u, 257u}) {
    const Grid1D r(nr, a, b, false), t(16, 0.0, kTwoPi, true), z(4, 0.0, 1.0, true);
    QNConfig cfg{r, {}, {}};
    for (double x : r.nodes()) {
      cfg.te.push_back(te_of(x));
      cfg.dlog_n0.push_back(kappa_of(x));
    }
    Field3D rho(r, t, z);
    for (std::size_t i = 0; i < nr; ++i)
      for (std::size_t j = 0; j < 16; ++j)
        for (std::size_t k = 0; k < 4; ++k) {
          const double x = r.node(static_cast<std::ptrdiff_t>(i));
          const double c = std::cos(m * t.node(static_cast<std::ptrdiff_t>(j)));
          rho(i, j, k) = (-(d2g(x) + (1.0 / x + kappa_of(x)) * dg(x) - m * m * g(x) / (x * x)) +
                          g(x) / te_of(x)) * c;
        }
    const QNSolver qn(cfg, 16);
    const Field3D phi = qn.solve(rho);
    std::vector<double> sq;
    for (std::size_t i = 0; i < nr; ++i)
      for (std::size_t j = 0; j < 16; ++j) {
        const double x = r.node(static_cast<std::ptrdiff_t>(i));
        const double d = phi(i, j, 1) - g(x) * std::cos(m * t.node(static_cast<std::ptrdiff_t>(j)));
        sq.push_back(d * d * r.spacing() * t.spacing());
      }
    h.push_back(r.spacing());
    e.push_back(std::sqrt(oracle::pairwise_sum(sq)));
  }
  return oracle::loglog_slope(h, e);
}

double rk4_order() {
  const BracketOperator op = rotation_operator(8);
  const Eigen::MatrixXd M = dense(op.matrix());
  const auto f0 = oracle::uniform(op.size(), -1, 1, 2);
  const Eigen::VectorXd v0 = Eigen::Map<const Eigen::VectorXd>(f0.data(), static_cast<Eigen::Index>(f0.size()));
  const double norm = M.cwiseAbs().rowwise().sum().maxCoeff();
  const double T = 4.0 / norm;
  const Eigen::VectorXd exact = (-T * M).exp() * v0;
  std::vector<double> h, e;
  for (int steps : {8, 16, 32, 64}) {
    auto f = f0;
    for (int s = 0; s < steps; ++s) rk4_step(op, f, T / steps);
    const Eigen::VectorXd v = Eigen::Map<const Eigen::VectorXd>(f.data(), static_cast<Eigen::Index>(f.size()));
    h.push_back(T / steps);
    e.push_back((v - exact).norm());
  }
  return oracle::loglog_slope(h, e);
}

}  // namespace props
