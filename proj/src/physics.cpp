#include "gksplit/physics.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <numbers>

namespace gksplit {

double RadialProfile::operator()(double r) const {
  return c_ * std::exp(-kappa_ * delta_r_ * std::tanh((r - r_p_) / delta_r_));
}

double RadialProfile::log_derivative(double r) const {
  const double s = 1.0 / std::cosh((r - r_p_) / delta_r_);
  return -kappa_ * s * s;
}

double profile_normalization(double kappa, double delta_r, double r_p, double r_min,
                             double r_max) {
  static constexpr std::array<double, 5> x{0.1488743389816312, 0.4333953941292472,
                                           0.6794095682990244, 0.8650633666889845,
                                           0.9739065285171717};
  static constexpr std::array<double, 5> w{0.2955242247147529, 0.2692667193099963,
                                           0.2190863625159820, 0.1494513491505806,
                                           0.0666713443086881};
  const int panels = 64;
  const double h = (r_max - r_min) / panels;
  auto g = [&](double r) { return std::exp(-kappa * delta_r * std::tanh((r - r_p) / delta_r)); };
  double sum = 0.0;
  for (int p = 0; p < panels; ++p) {
    const double mid = r_min + (p + 0.5) * h;
    double s = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k)
      s += w[k] * (g(mid - 0.5 * h * x[k]) + g(mid + 0.5 * h * x[k]));
    sum += 0.5 * h * s;
  }
  return (r_max - r_min) / sum;
}

ProfileConstants profile_constants(const ModelParams& p) {
  return {1.0, profile_normalization(p.kappa_n0, p.delta_r_n0, p.profile_center(), p.r_min,
                                     p.r_max)};
}

double Equilibrium::feq(double r, double vpar) const {
  const double t = ti(r);
  return n0(r) / std::sqrt(2.0 * std::numbers::pi * t) * std::exp(-vpar * vpar / (2.0 * t));
}

Equilibrium make_equilibrium(const ModelParams& p) {
  const ProfileConstants c = profile_constants(p);
  const double rp = p.profile_center();
  return {RadialProfile(c.c_n0, p.kappa_n0, p.delta_r_n0, rp),
          RadialProfile(c.c_ti, p.kappa_ti, p.delta_r_ti, rp),
          RadialProfile(1.0, p.kappa_te, p.delta_r_te, rp)};
}

double vortex_phi(double r, double theta) { return -5.0 * r * r + std::sin(theta); }
double rotation_phi(double r, double) { return -5.0 * r * r; }

double vortex_bump(double r, double theta) {
  const double d = theta - std::numbers::pi;
  const double rho = std::sqrt((r - 7.0) * (r - 7.0) + 2.0 * d * d);
  return rho <= 4.0 ? std::cos(std::numbers::pi / 8.0 * rho) : 0.0;
}

std::pair<Field2D, Field2D> vortex_initial(const Grid2D& grid, const Equilibrium& eq) {
  return {Field2D::from_function(grid, vortex_phi),
          Field2D::from_function(grid, [&](double r, double t) {
            return eq.feq(r, 0.0) + vortex_bump(r, t);
          })};
}

std::optional<std::pair<double, double>> characteristic_forward(Trajectory kind, double r0,
                                                                double theta0, double t) {
  const double theta = theta0 - 10.0 * t;
  if (kind == Trajectory::Rotation) return std::make_pair(r0, theta);
  const double rad = r0 * r0 + 0.2 * (std::sin(theta) - std::sin(theta0));
  if (rad < 0.0) return std::nullopt;
  return std::make_pair(std::sqrt(rad), theta);
}

std::optional<std::pair<double, double>> characteristic_foot(Trajectory kind, double r,
                                                             double theta, double t) {
  const double theta0 = theta + 10.0 * t;
  if (kind == Trajectory::Rotation) return std::make_pair(r, theta0);
  const double rad = r * r - 0.2 * (std::sin(theta) - std::sin(theta0));
  if (rad < 0.0) return std::nullopt;
  return std::make_pair(std::sqrt(rad), theta0);
}

ExactSolution exact_solution(Trajectory kind, double t, const Grid2D& grid,
                             const std::function<double(double, double)>& f0) {
  ExactSolution out{Field2D(grid), 0};
  for (std::size_t i = 0; i < grid.first.size(); ++i)
    for (std::size_t j = 0; j < grid.second.size(); ++j) {
      const auto foot = characteristic_foot(kind, grid.first.node(i), grid.second.node(j), t);
      if (!foot) {
        out.values(i, j) = std::numeric_limits<double>::quiet_NaN();
        ++out.domain_exits;
        continue;
      }
      // Reduce the angle so bump-style initial data see theta in [0, 2 pi).
      double th = std::fmod(foot->second, 2.0 * std::numbers::pi);
      if (th < 0.0) th += 2.0 * std::numbers::pi;
      out.values(i, j) = f0(foot->first, th);
    }
  return out;
}

Distribution4D gk_initial(const PhaseGrid4D& grid, const Equilibrium& eq, const ModelParams& p) {
  Distribution4D f(grid);
  const double rp = p.profile_center(), width = p.envelope();
  for (std::size_t ir = 0; ir < grid.r.size(); ++ir) {
    const double r = grid.r.node(ir);
    const double env = p.epsilon * std::exp(-(r - rp) * (r - rp) / width);
    for (std::size_t it = 0; it < grid.theta.size(); ++it)
      for (std::size_t iz = 0; iz < grid.z.size(); ++iz) {
        const double phase = p.m * grid.theta.node(it) + p.n * grid.z.node(iz) / p.major_radius;
        const double factor = 1.0 + env * std::cos(phase);
        auto line = f.vpar_line(ir, it, iz);
        for (std::size_t iv = 0; iv < grid.vpar.size(); ++iv)
          line[iv] = eq.feq(r, grid.vpar.node(iv)) * factor;
      }
  }
  return f;
}

}  // namespace gksplit
