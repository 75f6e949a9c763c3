#pragma once

#include <cstddef>
#include <vector>

#include "mop/channel.hpp"

namespace mop {

/// Hermitian matrix in compressed-row storage. Both triangles are stored.
class SparseHermitian {
 public:
  struct Entry {
    std::size_t col;
    Complex value;
  };

  SparseHermitian() = default;
  /// Rows given as lists of (column, value); duplicates within a row are
  /// summed. The Hermitian closure is enforced by averaging each (r,c) with
  /// conj(c,r); a structurally missing transpose entry is an error.
  explicit SparseHermitian(std::vector<std::vector<Entry>> rows);

  std::size_t dim() const { return row_ptr_.empty() ? 0 : row_ptr_.size() - 1; }
  std::size_t nonzeros() const { return cols_.size(); }

  /// y = Q x
  void multiply(const ComplexVector& x, ComplexVector& y) const;
  ComplexVector operator*(const ComplexVector& x) const {
    ComplexVector y(static_cast<Eigen::Index>(dim()));
    multiply(x, y);
    return y;
  }

  Complex coeff(std::size_t r, std::size_t c) const;
  ComplexMatrix to_dense() const;

  /// Distinct values of (col - row) over stored entries.
  std::vector<long long> diagonal_offsets() const;
  /// max |Q_rc - conj(Q_cr)| over stored entries.
  double hermitian_defect() const;

  /// Occupation-difference vectors [l]-[k] with nonzero support, filled by
  /// the level-operator assembly.
  std::vector<std::vector<int>> band_profile;

 private:
  std::vector<std::size_t> row_ptr_;
  std::vector<std::size_t> cols_;
  std::vector<Complex> vals_;
};

}  // namespace mop
