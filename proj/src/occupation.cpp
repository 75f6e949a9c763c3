#include "mop/occupation.hpp"

#include <cmath>
#include <numeric>
#include <string>

namespace mop {

namespace {

std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b) {
  std::uint64_t r;
  if (__builtin_mul_overflow(a, b, &r))
    throw CombinatorialOverflow("combinatorial value exceeds 64 bits");
  return r;
}

// C(n, k) with overflow detection; intermediate products are kept exact by
// dividing by gcd before multiplying.
std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  if (k > n - k) k = n - k;
  std::uint64_t r = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    // r * (n - k + i) / i is an integer; split the division to avoid overflow
    std::uint64_t num = n - k + i;
    std::uint64_t den = i;
    std::uint64_t g = std::gcd(r, den);
    r /= g;
    den /= g;
    num /= den;  // den now divides num
    r = checked_mul(r, num);
  }
  return r;
}

}  // namespace

std::uint64_t sym_dimension(int d, int n) {
  if (d < 1) throw std::invalid_argument("sym_dimension: d must be >= 1");
  if (n < 0) throw std::invalid_argument("sym_dimension: n must be >= 0");
  return binomial(static_cast<std::uint64_t>(n) + d - 1, static_cast<std::uint64_t>(d) - 1);
}

std::uint64_t multinomial(int n, std::span<const int> k) {
  long long sum = 0;
  for (int kj : k) {
    if (kj < 0) return 0;
    sum += kj;
  }
  if (sum != n)
    throw std::invalid_argument("multinomial: components sum to " + std::to_string(sum) +
                                ", expected " + std::to_string(n));
  // product of binomials C(k_1 + ... + k_j, k_j)
  std::uint64_t r = 1;
  std::uint64_t partial = 0;
  for (int kj : k) {
    partial += static_cast<std::uint64_t>(kj);
    r = checked_mul(r, binomial(partial, static_cast<std::uint64_t>(kj)));
  }
  return r;
}

double multinomial_double(int n, std::span<const int> k) {
  long long sum = 0;
  for (int kj : k) {
    if (kj < 0) return 0.0;
    sum += kj;
  }
  if (sum != n)
    throw std::invalid_argument("multinomial: components sum to " + std::to_string(sum) +
                                ", expected " + std::to_string(n));
  double r = 1.0;
  int partial = 0;
  for (int kj : k) {
    for (int i = 1; i <= kj; ++i) r = r * (partial + i) / i;
    partial += kj;
  }
  return r;
}

OccupationBasis::OccupationBasis(int d, int n) : d_(d), n_(n) {
  if (d < 1) throw std::invalid_argument("OccupationBasis: d must be >= 1");
  if (n < 0) throw std::invalid_argument("OccupationBasis: n must be >= 0");
  size_ = static_cast<std::size_t>(sym_dimension(d, n));

  dims_.assign(d + 1, std::vector<std::uint64_t>(n + 1, 0));
  for (int m = 1; m <= d; ++m)
    for (int t = 0; t <= n; ++t) dims_[m][t] = sym_dimension(m, t);

  flat_.reserve(size_ * d);
  OccupationIndex k(d, 0);
  k[0] = n;
  // Descending lexicographic walk: find the rightmost position j < d-1 with
  // k_j > 0, move one unit to j+1 and sweep everything after j+1 into it.
  while (true) {
    flat_.insert(flat_.end(), k.begin(), k.end());
    int j = d - 2;
    while (j >= 0 && k[j] == 0) --j;
    if (j < 0) break;
    --k[j];
    int rest = 1;
    for (int t = j + 1; t < d; ++t) {
      rest += k[t];
      k[t] = 0;
    }
    k[j + 1] = rest;
  }
}

std::size_t OccupationBasis::position(std::span<const int> k) const {
  // Vectors that precede k are those agreeing on a prefix and then having a
  // larger component. Counting them mode by mode gives the rank.
  std::size_t rank = 0;
  int remaining = n_;
  for (int j = 0; j + 1 < d_; ++j) {
    const int above = remaining - k[j] - 1;
    if (above >= 0) rank += static_cast<std::size_t>(dims_[d_ - j][above]);
    remaining -= k[j];
  }
  return rank;
}

}  // namespace mop
