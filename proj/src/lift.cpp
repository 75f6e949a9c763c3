#include "mop/lift.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace mop {

namespace {

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index r = 0; r < a.rows(); ++r)
    for (Eigen::Index c = 0; c < a.cols(); ++c)
      out.block(r * b.rows(), c * b.cols(), b.rows(), b.cols()) = a(r, c) * b;
  return out;
}

std::size_t join_index(std::span<const int> digits, int d) {
  std::size_t idx = 0;
  for (int x : digits) idx = idx * d + static_cast<std::size_t>(x);
  return idx;
}

// Occupation vector #(i) of a composite index.
OccupationIndex occupation_of(std::size_t index, int d, int q) {
  OccupationIndex k(d, 0);
  for (int t = 0; t < q; ++t) {
    ++k[index % d];
    index /= d;
  }
  return k;
}

}  // namespace

std::size_t tensor_power_dim(int d, int q, std::size_t cap) {
  if (d < 1 || q < 0) throw std::invalid_argument("tensor_power_dim: bad arguments");
  std::size_t n = 1;
  for (int t = 0; t < q; ++t) {
    n *= static_cast<std::size_t>(d);
    if (n > cap)
      throw std::length_error("tensor power dimension " + std::to_string(d) + "^" +
                              std::to_string(q) + " exceeds cap " + std::to_string(cap));
  }
  return n;
}

std::vector<int> split_index(std::size_t index, int d, int q) {
  std::vector<int> digits(q);
  for (int t = q - 1; t >= 0; --t) {
    digits[t] = static_cast<int>(index % d);
    index /= d;
  }
  return digits;
}

LiftedOperator lift_channel(const ChoiMatrix& choi, int q) {
  if (q < 2) throw std::invalid_argument("lift_channel: q must be >= 2");
  const int d = choi.d;
  const std::size_t dim = tensor_power_dim(d, q);
  LiftedOperator a{d, q, ComplexMatrix(dim, dim)};
  std::vector<int> ri, ci;
  for (std::size_t r = 0; r < dim; ++r) {
    ri = split_index(r, d, q);
    for (std::size_t c = 0; c < dim; ++c) {
      ci = split_index(c, d, q);
      ComplexMatrix prod = choi.block(ci[0], ri[0]);
      for (int t = 1; t < q; ++t) prod = (prod * choi.block(ci[t], ri[t])).eval();
      a.entries(r, c) = prod.trace();
    }
  }
  return a;
}

LiftedOperator symmetrize(const LiftedOperator& a) {
  const int d = a.d;
  const int q = a.q;
  if (q > kMaxSymmetrizeOrder)
    throw std::length_error("symmetrize: q = " + std::to_string(q) + " exceeds cap");
  const std::size_t dim = static_cast<std::size_t>(a.entries.rows());

  // Each permutation of tensor factors induces a permutation of composite
  // indices; tabulate those once.
  std::vector<int> perm(q);
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<std::vector<std::size_t>> maps;
  std::vector<int> digits, permuted(q);
  do {
    std::vector<std::size_t> m(dim);
    for (std::size_t i = 0; i < dim; ++i) {
      digits = split_index(i, d, q);
      for (int t = 0; t < q; ++t) permuted[t] = digits[perm[t]];
      m[i] = join_index(permuted, d);
    }
    maps.push_back(std::move(m));
  } while (std::next_permutation(perm.begin(), perm.end()));

  LiftedOperator out{d, q, ComplexMatrix::Zero(dim, dim)};
  for (const auto& m : maps)
    for (std::size_t c = 0; c < dim; ++c)
      for (std::size_t r = 0; r < dim; ++r) out.entries(r, c) += a.entries(m[r], m[c]);
  out.entries /= static_cast<double>(maps.size());
  return out;
}

CompressedOperator compress(const LiftedOperator& a) {
  const int d = a.d;
  const int q = a.q;
  const OccupationBasis basis(d, q);
  const std::size_t dim = static_cast<std::size_t>(a.entries.rows());

  std::vector<std::size_t> cls(dim);
  for (std::size_t i = 0; i < dim; ++i) cls[i] = basis.position(occupation_of(i, d, q));

  const std::size_t s = basis.size();
  ComplexMatrix sums = ComplexMatrix::Zero(s, s);
  for (std::size_t c = 0; c < dim; ++c)
    for (std::size_t r = 0; r < dim; ++r) sums(cls[r], cls[c]) += a.entries(r, c);

  std::vector<double> norm(s);
  for (std::size_t u = 0; u < s; ++u) norm[u] = std::sqrt(multinomial_double(q, basis[u]));

  CompressedOperator b{d, q, ComplexMatrix(s, s)};
  for (std::size_t v = 0; v < s; ++v)
    for (std::size_t u = 0; u < s; ++u) b.entries(u, v) = sums(u, v) / (norm[u] * norm[v]);
  return b;
}

Complex expectation_tensor_power(const LiftedOperator& a, const ComplexMatrix& rho) {
  ComplexMatrix power = rho;
  for (int t = 1; t < a.q; ++t) power = kron(power, rho);
  // Tr[A X] = sum_{ij} A_ij X_ji
  return (a.entries.cwiseProduct(power.transpose())).sum();
}

ComplexMatrix symmetric_isometry(int d, int n, std::size_t cap) {
  const std::size_t full = tensor_power_dim(d, n, cap);
  const OccupationBasis basis(d, n);
  ComplexMatrix p = ComplexMatrix::Zero(full, basis.size());
  for (std::size_t col = 0; col < basis.size(); ++col) {
    const double c = 1.0 / std::sqrt(multinomial_double(n, basis[col]));
    const auto target = basis.at(col);
    for (std::size_t i = 0; i < full; ++i)
      if (occupation_of(i, d, n) == target) p(i, col) = c;
  }
  return p;
}

}  // namespace mop
