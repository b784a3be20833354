#include "gksplit/linsolve.hpp"

#include <cmath>
#include <stdexcept>

namespace gksplit {

bool Tridiagonal::diagonally_dominant() const {
  const std::size_t n = diag.size();
  bool strict = false;
  for (std::size_t i = 0; i < n; ++i) {
    const double off = (i > 0 ? std::fabs(lower[i]) : 0.0) + (i + 1 < n ? std::fabs(upper[i]) : 0.0);
    const double d = std::fabs(diag[i]);
    if (d < off) return false;
    if (d > off) strict = true;
  }
  return strict;
}

TridiagonalFactor::TridiagonalFactor(const Tridiagonal& s) {
  const std::size_t n = s.size();
  if (s.lower.size() != n || s.upper.size() != n)
    throw std::invalid_argument("tridiagonal: band length mismatch");
  lower_ = s.lower;
  upper_.assign(n, 0.0);
  inv_pivot_.assign(n, 0.0);
  double pivot = s.diag[0];
  for (std::size_t i = 0; i < n; ++i) {
    if (i > 0) pivot = s.diag[i] - s.lower[i] * upper_[i - 1];
    if (std::fabs(pivot) < 1e-300) throw std::runtime_error("tridiagonal: singular pivot");
    inv_pivot_[i] = 1.0 / pivot;
    upper_[i] = i + 1 < n ? s.upper[i] * inv_pivot_[i] : 0.0;
  }
}

void TridiagonalFactor::solve(std::span<double> x) const {
  const std::size_t n = inv_pivot_.size();
  x[0] *= inv_pivot_[0];
  for (std::size_t i = 1; i < n; ++i) x[i] = (x[i] - lower_[i] * x[i - 1]) * inv_pivot_[i];
  for (std::size_t i = n - 1; i-- > 0;) x[i] -= upper_[i] * x[i + 1];
}

void solve_tridiagonal(const Tridiagonal& system, std::span<double> rhs_inout) {
  TridiagonalFactor(system).solve(rhs_inout);
}

CyclicTridiagonal::CyclicTridiagonal(std::size_t n, double a, double b, double c)
    : n_(n), a_(a), c_(c) {
  if (n < 3) throw std::invalid_argument("cyclic tridiagonal: need n >= 3");
  // Sherman-Morrison: A = T + u v^T with u = (gamma, 0, ..., 0, c), v = (1, 0, ..., 0, a/gamma).
  gamma_ = -b;
  Tridiagonal t{std::vector<double>(n, a), std::vector<double>(n, b), std::vector<double>(n, c)};
  t.diag[0] = b - gamma_;
  t.diag[n - 1] = b - a * c / gamma_;
  inner_ = TridiagonalFactor(t);
  z_.assign(n, 0.0);
  z_[0] = gamma_;
  z_[n - 1] = c;
  inner_.solve(z_);
}

void CyclicTridiagonal::solve(std::span<double> x) const {
  inner_.solve(x);
  const double vy = x[0] + a_ / gamma_ * x[n_ - 1];
  const double vz = z_[0] + a_ / gamma_ * z_[n_ - 1];
  const double factor = vy / (1.0 + vz);
  for (std::size_t i = 0; i < n_; ++i) x[i] -= factor * z_[i];
}

namespace {

double norm2(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

}  // namespace

KrylovResult gmres(const LinearOperator& apply, std::span<const double> b, std::span<double> x,
                   const GmresOptions& opt, const LinearOperator& precondition) {
  const std::size_t n = b.size();
  const std::size_t m = std::max<std::size_t>(1, opt.restart);
  KrylovResult result;
  const double bnorm = norm2(b);
  if (bnorm == 0.0) {
    std::fill(x.begin(), x.end(), 0.0);
    result.converged = true;
    return result;
  }

  std::vector<std::vector<double>> basis(m + 1, std::vector<double>(n));
  std::vector<std::vector<double>> hess(m + 1, std::vector<double>(m, 0.0));
  std::vector<double> cs(m), sn(m), g(m + 1), w(n), z(n), y(m);

  auto residual = [&](std::vector<double>& r) {
    apply(x, w);
    for (std::size_t i = 0; i < n; ++i) r[i] = b[i] - w[i];
  };

  while (result.iterations < opt.max_iterations) {
    residual(basis[0]);
    double beta = norm2(basis[0]);
    result.relative_residual = beta / bnorm;
    if (result.relative_residual <= opt.tolerance) {
      result.converged = true;
      return result;
    }
    for (double& v : basis[0]) v /= beta;
    std::fill(g.begin(), g.end(), 0.0);
    g[0] = beta;

    std::size_t k = 0;
    for (; k < m && result.iterations < opt.max_iterations; ++k) {
      ++result.iterations;
      if (precondition) {
        precondition(basis[k], z);
        apply(z, w);
      } else {
        apply(basis[k], w);
      }
      for (std::size_t j = 0; j <= k; ++j) {
        double h = 0.0;
        for (std::size_t i = 0; i < n; ++i) h += w[i] * basis[j][i];
        hess[j][k] = h;
        for (std::size_t i = 0; i < n; ++i) w[i] -= h * basis[j][i];
      }
      const double hnext = norm2(w);
      hess[k + 1][k] = hnext;
      if (hnext > 0.0)
        for (std::size_t i = 0; i < n; ++i) basis[k + 1][i] = w[i] / hnext;

      for (std::size_t j = 0; j < k; ++j) {
        const double t = cs[j] * hess[j][k] + sn[j] * hess[j + 1][k];
        hess[j + 1][k] = -sn[j] * hess[j][k] + cs[j] * hess[j + 1][k];
        hess[j][k] = t;
      }
      const double denom = std::hypot(hess[k][k], hess[k + 1][k]);
      cs[k] = hess[k][k] / denom;
      sn[k] = hess[k + 1][k] / denom;
      hess[k][k] = denom;
      hess[k + 1][k] = 0.0;
      g[k + 1] = -sn[k] * g[k];
      g[k] = cs[k] * g[k];
      if (std::fabs(g[k + 1]) / bnorm <= opt.tolerance || hnext == 0.0) {
        ++k;
        break;
      }
    }

    for (std::size_t j = k; j-- > 0;) {
      double s = g[j];
      for (std::size_t l = j + 1; l < k; ++l) s -= hess[j][l] * y[l];
      y[j] = s / hess[j][j];
    }
    std::fill(w.begin(), w.end(), 0.0);
    for (std::size_t j = 0; j < k; ++j)
      for (std::size_t i = 0; i < n; ++i) w[i] += y[j] * basis[j][i];
    if (precondition) {
      precondition(w, z);
      for (std::size_t i = 0; i < n; ++i) x[i] += z[i];
    } else {
      for (std::size_t i = 0; i < n; ++i) x[i] += w[i];
    }
  }

  residual(w);
  result.relative_residual = norm2(w) / bnorm;
  result.converged = result.relative_residual <= opt.tolerance;
  return result;
}

}  // namespace gksplit
