#ifndef CAUCHYCR_SPARSE_HPP
#define CAUCHYCR_SPARSE_HPP

#include <iosfwd>
#include <vector>

namespace cauchycr {

struct Triplet {
  int row;
  int col;
  double val;
};

/// Compressed sparse row matrix with sorted, unique column indices per row.
/// from_triplets canonicalizes by sorting on (row, col, value) before
/// accumulation, so the result is bit-identical for any traversal order of
/// the generating loop — the assembly-order-invariance contract.
class CsrMatrix {
public:
  CsrMatrix() = default;
  CsrMatrix(int rows, int cols) : rows_(rows), cols_(cols), row_ptr_(static_cast<std::size_t>(rows) + 1, 0) {}

  static CsrMatrix from_triplets(int rows, int cols, std::vector<Triplet> entries);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  std::size_t nnz() const { return vals_.size(); }
  const std::vector<int>& row_ptr() const { return row_ptr_; }
  const std::vector<int>& col_idx() const { return col_idx_; }
  const std::vector<double>& values() const { return vals_; }

  std::vector<double> multiply(const std::vector<double>& x) const;
  CsrMatrix transpose() const;

  /// x^T (this) y
  double bilinear(const std::vector<double>& x, const std::vector<double>& y) const;

  double max_abs() const;
  /// max |A - A^T| entry; 0 for symmetric matrices.
  double asymmetry() const;

  bool operator==(const CsrMatrix& other) const = default;

  /// Coordinate text export, one `i j value` line per entry.
  void write_coordinate(std::ostream& os) const;

private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<int> row_ptr_;
  std::vector<int> col_idx_;
  std::vector<double> vals_;
};

/// [[A, -S_W], [S_V, A^T]] with right side [rhs_w; rhs_v]; see linsys.
struct BlockParts {
  const CsrMatrix* a;
  const CsrMatrix* s_v;
  const CsrMatrix* s_w;
};

} // namespace cauchycr

#endif
