#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

#include "gksplit/bracket.hpp"
#include "gksplit/grid.hpp"
#include "gksplit/physics.hpp"

namespace gksplit {

/// Phase-space integrals with measure w4 = r dr dtheta dz dv:
///   mass = sum f w4, l2 = sum f^2 w4, e_pot = sum phi f w4,
///   e_kin = 1/2 sum (f - feq) v^2 w4.
struct ConservedSet {
  double mass = 0.0;
  double l2 = 0.0;
  double e_pot = 0.0;
  double e_kin = 0.0;
};

/// Radial partial sums run in parallel and are combined in fixed order, so
/// repeated calls bit-match regardless of thread count.
ConservedSet conserved_set(const Distribution4D& f, const Field3D& phi, const Equilibrium& eq);

/// sqrt(sum phi^2 r dr dtheta dz)
double phi_l2(const Field3D& phi);

enum class Quantity { Mass, L2, EPot, EKin };
double get(const ConservedSet& c, Quantity q);

struct RelativeError {
  double value = 0.0;
  bool absolute = false;  ///< baseline was zero, value is |Q(t) - Q(0)|
};

/// |Q - Q0| / |Q0|, or the absolute difference (flagged) when Q0 = 0.
RelativeError relative_error(double q0, double q);

struct GrowthFit {
  double amplitude = 0.0;
  double rate = 0.0;
};

/// Least-squares line through (t, log y). Needs >= 10 samples, all positive.
GrowthFit fit_growth_rate(std::span<const double> t, std::span<const double> y);

/// One row of diagnostics.csv.
struct DiagnosticsRow {
  std::size_t step = 0;
  double t = 0.0;
  ConservedSet conserved;
  /// largest relative change of each quantity over one poloidal substep in this step
  ConservedSet d_pol;
  IndicatorSet indicators;
  double phi_l2 = 0.0;
  double cfl = 0.0;
  std::size_t cn_iters = 0;
  double cn_residual = 0.0;
};

/// Append-only per-step record with non-decreasing t.
class DiagnosticsSeries {
public:
  void append(const DiagnosticsRow& row);
  const std::vector<DiagnosticsRow>& rows() const { return rows_; }
  std::size_t size() const { return rows_.size(); }
  bool empty() const { return rows_.empty(); }

  /// Relative error of a quantity at row k against row 0.
  RelativeError relative_error(Quantity q, std::size_t k) const;

  static const char* csv_header();
  /// Header plus one line per row, doubles with 17 significant digits.
  void write_csv(std::ostream& os) const;
  static void write_csv_row(std::ostream& os, const DiagnosticsRow& row);

private:
  std::vector<DiagnosticsRow> rows_;
};

}  // namespace gksplit
