#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

namespace gksplit {

/// Compressed-row sparse matrix with a fixed pattern. Values may be rewritten
/// in place; the pattern never changes after construction.
class CsrMatrix {
public:
  CsrMatrix() = default;
  CsrMatrix(std::size_t rows, std::size_t cols, std::vector<std::size_t> row_ptr,
            std::vector<std::size_t> col_idx);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t nonzeros() const { return col_idx_.size(); }

  std::span<const std::size_t> row_ptr() const { return row_ptr_; }
  std::span<const std::size_t> col_idx() const { return col_idx_; }
  std::span<double> values() { return values_; }
  std::span<const double> values() const { return values_; }

  /// y = A x
  void multiply(std::span<const double> x, std::span<double> y) const;
  /// y += alpha * A x
  void multiply_add(double alpha, std::span<const double> x, std::span<double> y) const;

  double max_abs() const;
  std::vector<double> diagonal() const;

  /// One `row,col,value` line per stored entry, 17 significant digits.
  void write_triplets(std::ostream& os) const;

private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<std::size_t> row_ptr_;
  std::vector<std::size_t> col_idx_;
  std::vector<double> values_;
};

}  // namespace gksplit
