#include <cmath>
#include <numbers>
#include <sstream>

#include "doctest.h"
#include "gksplit/bracket.hpp"
#include "support/oracles.hpp"
#include "support/properties.hpp"

using namespace gksplit;

namespace {

const FieldBoundary kPeriodic{BoundaryRule::periodic(), BoundaryRule::periodic()};

Grid2D periodic_box(std::size_t nx, std::size_t ny, double lx, double ly) {
  return make_cartesian_grid(Grid1D(nx, 0.0, lx, true), Grid1D(ny, 0.0, ly, true));
}

Field2D random_field(const Grid2D& g, unsigned seed, double amp = 100.0) {
  return Field2D(g, oracle::uniform(g.size(), -amp, amp, seed));
}

// Max error of the discrete bracket against the analytic one on a periodic box.
template <class F, class G, class J>
double bracket_error(std::size_t n, double aspect, StencilOrder order, F f, G g, J exact) {
  const double L = 2.0 * std::numbers::pi;
  const Grid2D grid = periodic_box(n, static_cast<std::size_t>(aspect * n), L, L);
  const HaloField hf(Field2D::from_function(grid, f), kPeriodic);
  const HaloField hg(Field2D::from_function(grid, g), kPeriodic);
  double err = 0.0;
  for (std::size_t i = 0; i < grid.first.size(); ++i)
    for (std::size_t j = 0; j < grid.second.size(); ++j) {
      const double x = grid.first.node(i), y = grid.second.node(j);
      err = std::max(err, std::fabs(eval_jh(hf, hg, i, j, grid.first.spacing(),
                                            grid.second.spacing(), order) -
                                    exact(x, y)));
    }
  return err;
}

}  // namespace

TEST_CASE("linear fields give the exact constant Jacobian") {
  for (double dy : {0.1, 0.05, 0.23}) {
    const Grid2D g = make_cartesian_grid(Grid1D(9, 0.0, 0.8, false),
                                         Grid1D(9, 0.0, 8 * dy, false));
    const double ax = 1.7, ay = -0.4, bx = 0.3, by = 2.2;
    const FieldBoundary ext{BoundaryRule::extrapolation([&](double x, double y) { return ax * x + ay * y; }),
                            BoundaryRule::extrapolation([&](double x, double y) { return ax * x + ay * y; })};
    const FieldBoundary ext2{BoundaryRule::extrapolation([&](double x, double y) { return bx * x + by * y; }),
                             BoundaryRule::extrapolation([&](double x, double y) { return bx * x + by * y; })};
    const HaloField f(Field2D::from_function(g, [&](double x, double y) { return ax * x + ay * y; }), ext);
    const HaloField h(Field2D::from_function(g, [&](double x, double y) { return bx * x + by * y; }), ext2);
    const double expect = ax * by - ay * bx;
    for (std::ptrdiff_t i = 0; i < 9; ++i)
      for (std::ptrdiff_t j = 0; j < 9; ++j) {
        CHECK(eval_j1(f, h, i, j, 0.1, dy) == doctest::Approx(expect).epsilon(1e-12));
        CHECK(eval_j2(f, h, i, j, 0.1, dy) == doctest::Approx(expect).epsilon(1e-12));
        CHECK(eval_jh(f, h, i, j, 0.1, dy, StencilOrder::Order4) ==
              doctest::Approx(expect).epsilon(1e-12));
      }
  }
  // f = x, g = y at an interior node gives exactly 1.
  const Grid2D g = make_cartesian_grid(Grid1D(8, 0.0, 7.0, false), Grid1D(8, 0.0, 7.0, false));
  const FieldBoundary z{BoundaryRule::dirichlet(), BoundaryRule::dirichlet()};
  const HaloField fx(Field2D::from_function(g, [](double x, double) { return x; }), z);
  const HaloField gy(Field2D::from_function(g, [](double, double y) { return y; }), z);
  CHECK(eval_j1(fx, gy, 3, 4, 1.0, 1.0) == 1.0);
  CHECK(eval_j2(fx, gy, 3, 4, 1.0, 1.0) == 1.0);
  CHECK(eval_jh(fx, gy, 3, 4, 1.0, 1.0, StencilOrder::Order4) == 1.0);
}

TEST_CASE("constant f and antisymmetry") {
  const Grid2D g = periodic_box(16, 12, 1.0, 1.0);
  const HaloField c(Field2D(g, 3.0), kPeriodic);
  const HaloField a(random_field(g, 1), kPeriodic);
  const HaloField b(random_field(g, 2), kPeriodic);
  for (std::ptrdiff_t i = 0; i < 16; ++i)
    for (std::ptrdiff_t j = 0; j < 12; ++j) {
      // All f differences vanish; only rounding of the telescoping g sums remains.
      const double ref = 3.0 * 200.0 / (0.1 * 0.2);
      CHECK(std::fabs(eval_j1(c, a, i, j, 0.1, 0.2)) <= 1e-15 * ref);
      CHECK(std::fabs(eval_j2(c, a, i, j, 0.1, 0.2)) <= 1e-15 * ref);
      // Bound of the 24 products entering J2, each |f||g| <= 100 * 200.
      const double terms = 24.0 * 100.0 * 200.0 / (24.0 * 0.1 * 0.2);
      CHECK(std::fabs(eval_j2(a, b, i, j, 0.1, 0.2) + eval_j2(b, a, i, j, 0.1, 0.2)) <=
            1e-14 * terms);
      CHECK(eval_jh(a, b, i, j, 0.1, 0.2, StencilOrder::Order2) == eval_j1(a, b, i, j, 0.1, 0.2));
    }
}

TEST_CASE("measured convergence orders, isotropic and anisotropic") {
  auto f = [](double x, double y) { return std::sin(x) * std::cos(y); };
  auto g = [](double x, double y) { return std::cos(2 * x) + std::sin(y); };
  auto exact = [](double x, double y) {
    // fx gy - fy gx
    return std::cos(x) * std::cos(y) * std::cos(y) - (-std::sin(x) * std::sin(y)) * (-2 * std::sin(2 * x));
  };
  for (double aspect : {1.0, 2.0}) {
    for (auto [order, target, tol] : {std::tuple{StencilOrder::Order2, 2.0, 0.1},
                                      std::tuple{StencilOrder::Order4, 4.0, 0.2}}) {
      std::vector<double> h, e;
      for (std::size_t n : {16u, 32u, 64u, 128u}) {
        h.push_back(1.0 / n);
        e.push_back(bracket_error(n, aspect, order, f, g, exact));
      }
      const double slope = oracle::loglog_slope(h, e);
      CAPTURE(aspect);
      CAPTURE(target);
      CHECK(std::fabs(slope - target) <= tol);
    }
  }
}

TEST_CASE("operator matches the pointwise stencil loop") {
  CHECK(props::operator_loop_mismatch() <= 1e-13);
}

TEST_CASE("small periodic grids merge duplicate columns") {
  const Grid2D g = periodic_box(4, 4, 1.0, 1.0);
  const Field2D phi = random_field(g, 3), f = random_field(g, 4);
  BracketOperator op(phi, StencilOrder::Order4, {kPeriodic, kPeriodic});
  const HaloField hp(phi, kPeriodic), hf(f, kPeriodic);
  std::vector<double> out(16);
  op.apply(f.values(), out);
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j)
      CHECK(out[i * 4 + j] ==
            doctest::Approx(eval_jh(hp, hf, i, j, 0.25, 0.25, StencilOrder::Order4)).epsilon(1e-12));
  CHECK(op.matrix().nonzeros() <= 16 * 12);
}

TEST_CASE("assembly and in-place update") {
  const Grid2D g = make_polar_grid(24, 32, 1.0, 4.0);
  const BracketBoundary bc{{BoundaryRule::dirichlet(), BoundaryRule::periodic()},
                           {BoundaryRule::extrapolation([](double r, double) { return 1.0 / r; }),
                            BoundaryRule::periodic()}};
  BracketOperator zero(Field2D(g), StencilOrder::Order4, bc);
  CHECK(zero.max_abs_entry() == 0.0);
  for (double v : zero.offset()) CHECK(v == 0.0);

  const Field2D p1 = random_field(g, 5), p2 = random_field(g, 6);
  BracketOperator op(p1, StencilOrder::Order4, bc);
  const auto before = std::vector<double>(op.matrix().values().begin(), op.matrix().values().end());
  op.update(p1);
  CHECK(std::equal(before.begin(), before.end(), op.matrix().values().begin()));
  const std::size_t nnz = op.matrix().nonzeros();
  for (int k = 0; k < 100; ++k) op.update(k % 2 ? p1 : p2);
  CHECK(op.matrix().nonzeros() == nnz);
  const BracketOperator fresh(p2, StencilOrder::Order4, bc);
  op.update(p2);
  CHECK(std::equal(fresh.matrix().values().begin(), fresh.matrix().values().end(),
                   op.matrix().values().begin()));
  CHECK(std::equal(fresh.offset().begin(), fresh.offset().end(), op.offset().begin()));

  Field2D bad = p1;
  bad(0, 0) = std::nan("");
  CHECK_THROWS(op.update(bad));
  CHECK_THROWS(op.update(Field2D(make_polar_grid(24, 16, 1.0, 4.0))));

  std::ostringstream dump;
  op.write_dump(dump);
  CHECK(dump.str().find("offset\n") != std::string::npos);
}

TEST_CASE("skew symmetry in the r-weighted inner product") {
  CHECK(props::skew_symmetry_defect() <= 1e-12);
}

TEST_CASE("algebraic indicators vanish") {
  const Grid2D g = make_polar_grid(64, 64, 0.1, 14.5);
  const auto w = polar_weights(g);
  Field2D zero(g);
  BracketOperator op0(zero, StencilOrder::Order2, {kPeriodic, kPeriodic});
  const auto i0 = algebraic_indicators(op0, zero, zero, w);
  CHECK(i0.raw.mass == 0.0);
  CHECK(i0.raw.l2 == 0.0);
  CHECK(i0.raw.energy == 0.0);

  // Unit-scale data, boundary rows zero in r for the Dirichlet case, equal to
  // the equilibrium for the extrapolation case.
  auto feq = [](double r, double) { return std::exp(-r / 5.0); };
  Field2D phi = random_field(g, 31, 1.0), f = random_field(g, 32, 1.0);
  for (std::size_t j = 0; j < 64; ++j) phi(0, j) = phi(63, j) = f(0, j) = f(63, j) = 0.0;
  Field2D fe = f;
  for (std::size_t j = 0; j < 64; ++j) {
    fe(0, j) = feq(g.first.node(0), 0.0);
    fe(63, j) = feq(g.first.node(63), 0.0);
  }
  const FieldBoundary dir{BoundaryRule::dirichlet(), BoundaryRule::periodic()};
  const FieldBoundary ext{BoundaryRule::extrapolation(feq), BoundaryRule::periodic()};
  for (auto order : {StencilOrder::Order2, StencilOrder::Order4}) {
    for (int variant = 0; variant < 2; ++variant) {
      const Field2D& data = variant == 0 ? f : fe;
      const BracketOperator op(phi, order, {dir, variant == 0 ? dir : ext});
      const auto ind = algebraic_indicators(op, phi, data, w);
      CAPTURE(variant);
      CHECK(std::fabs(ind.raw.mass) < 1e-10);
      CHECK(std::fabs(ind.raw.l2) < 1e-10);
      CHECK(std::fabs(ind.raw.energy) < 1e-10);
      CHECK(std::fabs(ind.normalized.l2) < 1e-15);
    }
  }
}
