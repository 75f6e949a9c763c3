#pragma once

#include <cstdint>
#include <optional>

#include "mop/sparse.hpp"

namespace mop {

struct LanczosOptions {
  double tol = 1e-12;          // on the explicit residual ||Qx - lambda x||
  std::size_t max_iter = 0;    // matrix-vector products; 0 means 10 * dim
  std::size_t basis_size = 48; // Krylov vectors kept before a thick restart
  std::size_t keep = 16;       // Ritz vectors retained across a restart
  std::uint64_t seed = 1;
};

struct Eigenpair {
  double value = 0.0;
  ComplexVector vector;
  double residual = 0.0;
  std::size_t iterations = 0;  // matrix-vector products
  bool converged = false;
};

/// Largest algebraic eigenvalue of a Hermitian sparse matrix by thick-restart
/// Lanczos with full reorthogonalization.
///
/// Without an explicit start vector the iteration begins from a uniform
/// positive vector perturbed by seeded noise. A non-converged run returns the
/// best pair seen with converged = false.
Eigenpair largest_eigenpair(const SparseHermitian& q, const LanczosOptions& opts = {},
                            const std::optional<ComplexVector>& start = std::nullopt);

}  // namespace mop
