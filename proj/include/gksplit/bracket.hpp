#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "gksplit/grid.hpp"
#include "gksplit/sparse.hpp"

namespace gksplit {

enum class StencilOrder { Order2, Order4 };

/// Closure of a function in one grid direction.
struct BoundaryRule {
  enum class Kind { Periodic, DirichletZero, Extrapolation };
  using Supplier = std::function<double(double first, double second)>;

  Kind kind = Kind::Periodic;
  /// Exterior values for Extrapolation, evaluated at linearly extended
  /// coordinates (x_{-1} = x_0 - d, ...).
  Supplier supplier;

  static BoundaryRule periodic() { return {Kind::Periodic, {}}; }
  static BoundaryRule dirichlet() { return {Kind::DirichletZero, {}}; }
  static BoundaryRule extrapolation(Supplier s) { return {Kind::Extrapolation, std::move(s)}; }
};

std::string to_string(BoundaryRule::Kind kind);
BoundaryRule::Kind parse_boundary_kind(const std::string& name);

/// Rules for one function in both grid directions.
struct FieldBoundary {
  BoundaryRule first;   ///< r (or x)
  BoundaryRule second;  ///< theta (or y)
};

/// Closures for the potential and for the advected function.
struct BracketBoundary {
  FieldBoundary phi;
  FieldBoundary f;
};

/// Node values padded by two ghost layers in each direction. Ghosts are filled
/// from the boundary rules: periodic ghosts wrap, Dirichlet ghosts are zero,
/// extrapolation ghosts come from the supplier.
class HaloField {
public:
  static constexpr std::ptrdiff_t width = 2;

  HaloField(const Field2D& interior, const FieldBoundary& rules);

  double at(std::ptrdiff_t i, std::ptrdiff_t j) const {
    return values_[static_cast<std::size_t>((i + width) * padded_cols_ + (j + width))];
  }
  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  const Grid2D& grid() const { return grid_; }

private:
  Grid2D grid_;
  std::size_t rows_, cols_;
  std::ptrdiff_t padded_cols_;
  std::vector<double> values_;
};

/// Arakawa nine-point bracket (J1^{++} + J1^{+x} + J1^{x+}) / 3 at node (i, j),
/// approximating df/dx dg/dy - df/dy dg/dx.
double eval_j1(const HaloField& f, const HaloField& g, std::ptrdiff_t i, std::ptrdiff_t j,
               double dx, double dy);
/// Extended thirteen-point bracket (J2^{xx} + J2^{x+} + J2^{+x}) / 3.
double eval_j2(const HaloField& f, const HaloField& g, std::ptrdiff_t i, std::ptrdiff_t j,
               double dx, double dy);
/// J1 for Order2, 2 J1 - J2 for Order4.
double eval_jh(const HaloField& f, const HaloField& g, std::ptrdiff_t i, std::ptrdiff_t j,
               double dx, double dy, StencilOrder order);

struct IndicatorSet {
  double mass = 0.0;
  double l2 = 0.0;
  double energy = 0.0;
};

struct Indicators {
  IndicatorSet raw;
  /// raw / (||phi||_2 ||f||_2 sum w)
  IndicatorSet normalized;
};

/// Sparse operator f -> J_h(phi, f) (times 1/r for the polar metric) plus an
/// affine offset collecting the extrapolated exterior values of f.
///
/// The sparsity pattern depends only on the grid, order and closures. Updating
/// phi rewrites the stored values in place.
class BracketOperator {
public:
  BracketOperator(const Field2D& phi, StencilOrder order, BracketBoundary boundary);

  /// Recompute all entries for a new potential on the same grid.
  void update(const Field2D& phi);

  /// out = M f + offset
  void apply(std::span<const double> f, std::span<double> out) const;
  /// out = M f
  void apply_linear(std::span<const double> f, std::span<double> out) const;

  const Grid2D& grid() const { return grid_; }
  StencilOrder order() const { return order_; }
  const BracketBoundary& boundary() const { return boundary_; }
  std::size_t size() const { return grid_.size(); }

  const CsrMatrix& matrix() const { return interior_; }
  const CsrMatrix& halo_matrix() const { return halo_; }
  std::span<const double> offset() const { return offset_; }
  bool has_offset() const { return halo_.cols() > 0; }

  /// Exterior f values for a supplier, in halo-column order.
  std::vector<double> halo_values(const BoundaryRule::Supplier& supplier) const;
  /// out = halo_matrix * halo_values
  void compute_offset(std::span<const double> halo_values, std::span<double> out) const;
  /// Replace the stored halo values (and hence the stored offset).
  void set_halo_values(std::span<const double> halo_values);

  double max_abs_entry() const { return interior_.max_abs(); }

  /// Triplet dump `row,col,value` followed by `offset` and one `row,value`
  /// line per nonzero offset entry.
  void write_dump(std::ostream& os) const;

private:
  struct HaloNode {
    std::ptrdiff_t i, j;
  };

  void build_pattern();
  void recompute_offset();

  Grid2D grid_;
  StencilOrder order_;
  BracketBoundary boundary_;
  std::size_t stencil_width_;  // entries of the offset list used by this order
  CsrMatrix interior_;
  CsrMatrix halo_;
  std::vector<HaloNode> halo_nodes_;
  std::vector<std::int64_t> slots_;  // per (row, stencil offset): >=0 interior, <=-2 halo, -1 none
  std::vector<double> halo_values_;
  std::vector<double> offset_;
};

/// I_mass = sum w Jf, I_l2 = sum w f Jf, I_energy = sum w phi Jf with Jf = apply(op, f).
Indicators algebraic_indicators(const BracketOperator& op, const Field2D& phi, const Field2D& f,
                                std::span<const double> weights);

}  // namespace gksplit
