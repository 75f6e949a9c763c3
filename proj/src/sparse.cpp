#include "mop/sparse.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace mop {

SparseHermitian::SparseHermitian(std::vector<std::vector<Entry>> rows) {
  const std::size_t n = rows.size();
  row_ptr_.assign(n + 1, 0);
  for (std::size_t r = 0; r < n; ++r) {
    auto& row = rows[r];
    std::sort(row.begin(), row.end(),
              [](const Entry& a, const Entry& b) { return a.col < b.col; });
    std::size_t kept = 0;
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (row[i].col >= n) throw std::out_of_range("SparseHermitian: column out of range");
      if (kept > 0 && row[kept - 1].col == row[i].col)
        row[kept - 1].value += row[i].value;
      else
        row[kept++] = row[i];
    }
    row.resize(kept);
    row_ptr_[r + 1] = row_ptr_[r] + kept;
  }
  cols_.reserve(row_ptr_[n]);
  vals_.reserve(row_ptr_[n]);
  for (const auto& row : rows)
    for (const auto& e : row) {
      cols_.push_back(e.col);
      vals_.push_back(e.value);
    }

  // Hermitian closure. Averaging the pair once from the upper triangle keeps
  // both copies exactly conjugate.
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t i = row_ptr_[r]; i < row_ptr_[r + 1]; ++i) {
      const std::size_t c = cols_[i];
      if (c < r) continue;
      if (c == r) {
        vals_[i] = Complex(vals_[i].real(), 0.0);
        continue;
      }
      const auto first = cols_.begin() + static_cast<std::ptrdiff_t>(row_ptr_[c]);
      const auto last = cols_.begin() + static_cast<std::ptrdiff_t>(row_ptr_[c + 1]);
      const auto it = std::lower_bound(first, last, r);
      if (it == last || *it != r)
        throw std::invalid_argument("SparseHermitian: pattern is not symmetric");
      const std::size_t j = static_cast<std::size_t>(it - cols_.begin());
      const Complex avg = 0.5 * (vals_[i] + std::conj(vals_[j]));
      vals_[i] = avg;
      vals_[j] = std::conj(avg);
    }
  }
}

void SparseHermitian::multiply(const ComplexVector& x, ComplexVector& y) const {
  const std::size_t n = dim();
  if (static_cast<std::size_t>(x.size()) != n)
    throw std::invalid_argument("SparseHermitian::multiply: size mismatch");
  y.resize(static_cast<Eigen::Index>(n));
  for (std::size_t r = 0; r < n; ++r) {
    Complex acc = 0.0;
    for (std::size_t i = row_ptr_[r]; i < row_ptr_[r + 1]; ++i)
      acc += vals_[i] * x[static_cast<Eigen::Index>(cols_[i])];
    y[static_cast<Eigen::Index>(r)] = acc;
  }
}

Complex SparseHermitian::coeff(std::size_t r, std::size_t c) const {
  const auto first = cols_.begin() + static_cast<std::ptrdiff_t>(row_ptr_[r]);
  const auto last = cols_.begin() + static_cast<std::ptrdiff_t>(row_ptr_[r + 1]);
  const auto it = std::lower_bound(first, last, c);
  if (it == last || *it != c) return 0.0;
  return vals_[static_cast<std::size_t>(it - cols_.begin())];
}

ComplexMatrix SparseHermitian::to_dense() const {
  const auto n = static_cast<Eigen::Index>(dim());
  ComplexMatrix m = ComplexMatrix::Zero(n, n);
  for (std::size_t r = 0; r < dim(); ++r)
    for (std::size_t i = row_ptr_[r]; i < row_ptr_[r + 1]; ++i)
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(cols_[i])) = vals_[i];
  return m;
}

std::vector<long long> SparseHermitian::diagonal_offsets() const {
  std::set<long long> offs;
  for (std::size_t r = 0; r < dim(); ++r)
    for (std::size_t i = row_ptr_[r]; i < row_ptr_[r + 1]; ++i)
      offs.insert(static_cast<long long>(cols_[i]) - static_cast<long long>(r));
  return {offs.begin(), offs.end()};
}

double SparseHermitian::hermitian_defect() const {
  double worst = 0.0;
  for (std::size_t r = 0; r < dim(); ++r)
    for (std::size_t i = row_ptr_[r]; i < row_ptr_[r + 1]; ++i)
      worst = std::max(worst, std::abs(vals_[i] - std::conj(coeff(cols_[i], r))));
  return worst;
}

}  // namespace mop
