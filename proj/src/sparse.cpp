#include "cauchycr/sparse.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "cauchycr/util.hpp"

namespace cauchycr {

CsrMatrix CsrMatrix::from_triplets(int rows, int cols, std::vector<Triplet> entries) {
  std::sort(entries.begin(), entries.end(), [](const Triplet& a, const Triplet& b) {
    if (a.row != b.row) return a.row < b.row;
    if (a.col != b.col) return a.col < b.col;
    return a.val < b.val;
  });
  CsrMatrix m(rows, cols);
  m.col_idx_.reserve(entries.size());
  m.vals_.reserve(entries.size());
  std::size_t i = 0;
  while (i < entries.size()) {
    const int r = entries[i].row, c = entries[i].col;
    double sum = 0.0;
    while (i < entries.size() && entries[i].row == r && entries[i].col == c) sum += entries[i++].val;
    m.col_idx_.push_back(c);
    m.vals_.push_back(sum);
    ++m.row_ptr_[static_cast<std::size_t>(r) + 1];
  }
  for (int r = 0; r < rows; ++r)
    m.row_ptr_[static_cast<std::size_t>(r) + 1] += m.row_ptr_[static_cast<std::size_t>(r)];
  return m;
}

std::vector<double> CsrMatrix::multiply(const std::vector<double>& x) const {
  std::vector<double> y(static_cast<std::size_t>(rows_), 0.0);
  for (int r = 0; r < rows_; ++r) {
    double s = 0.0;
    for (int k = row_ptr_[static_cast<std::size_t>(r)]; k < row_ptr_[static_cast<std::size_t>(r) + 1]; ++k)
      s += vals_[static_cast<std::size_t>(k)] * x[static_cast<std::size_t>(col_idx_[static_cast<std::size_t>(k)])];
    y[static_cast<std::size_t>(r)] = s;
  }
  return y;
}

CsrMatrix CsrMatrix::transpose() const {
  std::vector<Triplet> t;
  t.reserve(nnz());
  for (int r = 0; r < rows_; ++r)
    for (int k = row_ptr_[static_cast<std::size_t>(r)]; k < row_ptr_[static_cast<std::size_t>(r) + 1]; ++k)
      t.push_back({col_idx_[static_cast<std::size_t>(k)], r, vals_[static_cast<std::size_t>(k)]});
  return from_triplets(cols_, rows_, std::move(t));
}

double CsrMatrix::bilinear(const std::vector<double>& x, const std::vector<double>& y) const {
  const auto my = multiply(y);
  return dot(x, my);
}

double CsrMatrix::max_abs() const {
  double m = 0.0;
  for (double v : vals_) m = std::max(m, std::abs(v));
  return m;
}

double CsrMatrix::asymmetry() const {
  const CsrMatrix t = transpose();
  double m = 0.0;
  for (int r = 0; r < rows_; ++r) {
    int ka = row_ptr_[static_cast<std::size_t>(r)];
    int kb = t.row_ptr_[static_cast<std::size_t>(r)];
    const int ea = row_ptr_[static_cast<std::size_t>(r) + 1], eb = t.row_ptr_[static_cast<std::size_t>(r) + 1];
    while (ka < ea || kb < eb) {
      const int ca = ka < ea ? col_idx_[static_cast<std::size_t>(ka)] : cols_;
      const int cb = kb < eb ? t.col_idx_[static_cast<std::size_t>(kb)] : cols_;
      if (ca == cb) {
        m = std::max(m, std::abs(vals_[static_cast<std::size_t>(ka)] - t.vals_[static_cast<std::size_t>(kb)]));
        ++ka;
        ++kb;
      } else if (ca < cb) {
        m = std::max(m, std::abs(vals_[static_cast<std::size_t>(ka)]));
        ++ka;
      } else {
        m = std::max(m, std::abs(t.vals_[static_cast<std::size_t>(kb)]));
        ++kb;
      }
    }
  }
  return m;
}

void CsrMatrix::write_coordinate(std::ostream& os) const {
  for (int r = 0; r < rows_; ++r)
    for (int k = row_ptr_[static_cast<std::size_t>(r)]; k < row_ptr_[static_cast<std::size_t>(r) + 1]; ++k)
      os << r << ' ' << col_idx_[static_cast<std::size_t>(k)] << ' '
         << format_g17(vals_[static_cast<std::size_t>(k)]) << '\n';
}

} // namespace cauchycr
