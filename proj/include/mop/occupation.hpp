#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

namespace mop {

class CombinatorialOverflow : public std::overflow_error {
 public:
  using std::overflow_error::overflow_error;
};

/// Occupation numbers [k_1, ..., k_d] of a symmetric basis vector: k_j counts
/// how many tensor factors sit in mode j.
using OccupationIndex = std::vector<int>;

/// Dimension of the totally symmetric subspace of (C^d)^{(x) n}, C(n+d-1, d-1).
/// Throws CombinatorialOverflow when the result does not fit in 64 bits.
std::uint64_t sym_dimension(int d, int n);

/// n! / prod_j k_j!.  Returns 0 if any component is negative; throws
/// std::invalid_argument if all components are non-negative but do not sum
/// to n, CombinatorialOverflow if the result exceeds 64 bits.
std::uint64_t multinomial(int n, std::span<const int> k);

/// Multinomial as a double; exact below 2^53, no overflow up to n ~ 170.
double multinomial_double(int n, std::span<const int> k);

/// All occupation vectors with d components summing to n, in descending
/// lexicographic order ([n,0,..] first, [..,0,n] last).
class OccupationBasis {
 public:
  OccupationBasis(int d, int n);

  int modes() const { return d_; }
  int particles() const { return n_; }
  std::size_t size() const { return size_; }

  std::span<const int> operator[](std::size_t pos) const {
    return {flat_.data() + pos * static_cast<std::size_t>(d_), static_cast<std::size_t>(d_)};
  }
  OccupationIndex at(std::size_t pos) const {
    auto s = (*this)[pos];
    return {s.begin(), s.end()};
  }

  /// Row number of an occupation vector; inverse of operator[]. The vector
  /// must have d non-negative components summing to n.
  std::size_t position(std::span<const int> k) const;

 private:
  int d_;
  int n_;
  std::size_t size_;
  std::vector<int> flat_;
  std::vector<std::vector<std::uint64_t>> dims_;  // dims_[m][t] = S(m, t)
};

inline OccupationBasis enumerate_occupations(int d, int n) { return OccupationBasis(d, n); }

}  // namespace mop
