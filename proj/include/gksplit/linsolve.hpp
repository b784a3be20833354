#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace gksplit {

/// Tridiagonal system: lower[i] x[i-1] + diag[i] x[i] + upper[i] x[i+1] = rhs[i].
/// lower[0] and upper[n-1] are ignored.
struct Tridiagonal {
  std::vector<double> lower, diag, upper;

  std::size_t size() const { return diag.size(); }
  /// |diag| >= |lower| + |upper| on every row, strict on at least one.
  bool diagonally_dominant() const;
};

/// Thomas elimination; throws std::runtime_error on a vanishing pivot.
void solve_tridiagonal(const Tridiagonal& system, std::span<double> rhs_inout);

/// Precomputed LU factors of a tridiagonal matrix for repeated solves.
class TridiagonalFactor {
public:
  TridiagonalFactor() = default;
  explicit TridiagonalFactor(const Tridiagonal& system);
  void solve(std::span<double> rhs_inout) const;
  std::size_t size() const { return inv_pivot_.size(); }

private:
  std::vector<double> lower_, upper_, inv_pivot_;
};

/// Periodic (cyclic) tridiagonal solve with constant coefficients
/// a x[i-1] + b x[i] + c x[i+1] = rhs[i], indices taken modulo n.
class CyclicTridiagonal {
public:
  CyclicTridiagonal(std::size_t n, double a, double b, double c);
  void solve(std::span<double> rhs_inout) const;
  std::size_t size() const { return n_; }

private:
  std::size_t n_;
  double a_, c_;
  TridiagonalFactor inner_;
  std::vector<double> z_;  // A^{-1} u for the Sherman-Morrison correction
  double gamma_;
};

using LinearOperator = std::function<void(std::span<const double>, std::span<double>)>;

struct KrylovResult {
  std::size_t iterations = 0;
  double relative_residual = 0.0;
  bool converged = false;
};

struct GmresOptions {
  double tolerance = 1e-12;       ///< on ||b - A x|| / ||b||
  std::size_t max_iterations = 500;
  std::size_t restart = 40;
};

/// Restarted GMRES with modified Gram-Schmidt and Givens rotations. `x` holds
/// the initial guess on entry and the solution on return. An optional
/// right preconditioner is applied as x = M^{-1} y.
KrylovResult gmres(const LinearOperator& apply, std::span<const double> b, std::span<double> x,
                   const GmresOptions& options, const LinearOperator& precondition = {});

}  // namespace gksplit
