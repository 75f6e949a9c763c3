#pragma once

#include <cstdint>

#include "mop/channel.hpp"
#include "mop/lift.hpp"

namespace mop {

/// Tr[Phi(psi psi^dagger)^q] for a unit vector psi.
double output_purity(const QuantumChannel& channel, const ComplexVector& psi, int q);

/// G psi with G = q Phi*(Phi(psi psi^dagger)^{q-1}); G is the gradient
/// operator of psi -> Tr[Phi(psi psi^dagger)^q].
ComplexVector ascent_direction(const QuantumChannel& channel, const ComplexVector& psi, int q);

struct SearchResult {
  double value = 0.0;
  ComplexVector psi;
  int restarts_used = 0;
  double converged_fraction = 0.0;
};

/// Multi-start fixed-point ascent psi <- normalize(G psi) from random unit
/// vectors. Each restart stops when the gain drops below 1e-14 or after
/// 10^4 iterations. Finds local optima only.
SearchResult local_search(const QuantumChannel& channel, int q, int restarts, std::uint64_t seed);

struct GridBracket {
  double lower = 0.0;  // best grid value
  double upper = 0.0;  // lower + curvature slack
  double theta = 0.0;  // location of the best grid point
  double phi = 0.0;
};

/// Exhaustive scan of qubit pure states cos(t/2)|0> + e^{i f} sin(t/2)|1>
/// on a resolution x resolution grid in (t, f). Qubit channels only.
GridBracket bloch_grid_oracle(const QuantumChannel& channel, int q, int resolution);

/// Explicit P^dagger (A (x) I^{(x) n}) P with P the dense symmetric isometry
/// on q+n copies. Limited to d^{q+n} <= kMaxLiftedDim.
ComplexMatrix dense_lift_oracle(const LiftedOperator& a, int n);

}  // namespace mop
