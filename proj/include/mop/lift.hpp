#pragma once

#include <cstddef>

#include "mop/channel.hpp"
#include "mop/occupation.hpp"

namespace mop {

/// Largest tensor-power dimension d^q materialized densely.
inline constexpr std::size_t kMaxLiftedDim = 4096;
/// Largest q for which all q! permutations are enumerated.
inline constexpr int kMaxSymmetrizeOrder = 8;

/// Operator A on (C^d)^{(x) q} with Tr[A rho^{(x) q}] = Tr[Phi(rho)^q].
/// Composite index (i_1, ..., i_q) maps to sum_t i_t d^{q-1-t}, so the first
/// tensor factor is the most significant digit.
struct LiftedOperator {
  int d = 0;
  int q = 0;
  ComplexMatrix entries;
};

/// Compression of a lifted operator onto the symmetric subspace, indexed by
/// occupation vectors of OccupationBasis(d, q).
struct CompressedOperator {
  int d = 0;
  int q = 0;
  ComplexMatrix entries;
};

/// d^q, throwing if it exceeds `cap`.
std::size_t tensor_power_dim(int d, int q, std::size_t cap = kMaxLiftedDim);

/// Digits (i_1, ..., i_q) of a composite index.
std::vector<int> split_index(std::size_t index, int d, int q);

/// A_{(i),(j)} = Tr[F_{i_1 j_1} ... F_{i_q j_q}] with F_{ij} = Phi(E_ji).
/// The transposed block order is what makes Tr[A rho^{(x)q}] reproduce
/// Tr[Phi(rho)^q] under Tr[A X] = sum A_{(i),(j)} X_{(j),(i)}.
LiftedOperator lift_channel(const ChoiMatrix& choi, int q);

/// Average of P_pi^dagger A P_pi over all permutations of the q factors.
LiftedOperator symmetrize(const LiftedOperator& a);

/// B_{[u],[v]} = (C^q_[u] C^q_[v])^{-1/2} sum{ A_{(i),(j)} : #(i)=[u], #(j)=[v] }.
CompressedOperator compress(const LiftedOperator& a);

/// Tr[A rho^{(x) q}] computed by explicit tensor powers (dense).
Complex expectation_tensor_power(const LiftedOperator& a, const ComplexMatrix& rho);

/// Dense isometry whose column [k] is the normalized symmetrization of the
/// occupation vector [k]: entry ((i),[k]) = delta_{#(i),[k]} (C^n_[k])^{-1/2}.
ComplexMatrix symmetric_isometry(int d, int n, std::size_t cap = kMaxLiftedDim);

}  // namespace mop
