#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "mop/lanczos.hpp"
#include "mop/lift.hpp"
#include "mop/sparse.hpp"

namespace mop {

class SolverError : public std::runtime_error {
 public:
  SolverError(const std::string& what, int level)
      : std::runtime_error(what), level_(level) {}
  /// Level n at which the failure occurred, or -1.
  int level() const { return level_; }

 private:
  int level_;
};

/// Compression of B (x) I^{(x) n} onto the symmetric subspace of q+n copies,
/// indexed by OccupationBasis(d, q+n). Its largest eigenvalue is mu_n.
SparseHermitian assemble_level_operator(const CompressedOperator& b, int n);

struct LevelResult {
  int n = 0;
  std::size_t dim = 0;
  double mu = 0.0;
  ComplexVector psi;  // amplitudes over OccupationBasis(d, q+n)
  std::size_t iterations = 0;
  double residual = 0.0;
  double wall_ms = 0.0;
};

struct PuritySequence {
  int d = 0;
  int q = 0;
  std::vector<LevelResult> levels;  // strictly increasing n
};

/// Tolerated upward step between consecutive levels before the sequence is
/// declared inconsistent.
inline constexpr double kMonotonicityTol = 1e-10;

struct SequenceOptions {
  double eig_tol = 1e-12;
  std::size_t max_iter = 0;  // per level; 0 means 10 * dim
  std::uint64_t seed = 1;
  /// Single-particle state whose symmetric lift seeds the first level's
  /// eigensolver. When absent the default Lanczos start vector is used.
  std::optional<ComplexVector> seed_state;
};

/// mu_n for every n in `schedule`. Each level after the first is warm-started
/// from the previous eigenvector extended by one particle in the dominant
/// mode of its one-body state. Throws SolverError tagged with the level on
/// eigensolver failure or a monotonicity violation.
PuritySequence purity_sequence(const CompressedOperator& b, const std::vector<int>& schedule,
                               const SequenceOptions& opts = {});

/// 1, 2, ..., n_max.
std::vector<int> dense_schedule(int n_max);
/// 1..min(n_max, 32) in unit steps, then doubling up to n_max (n_max itself
/// is always included).
std::vector<int> geometric_schedule(int n_max);

struct ExtrapolationFit {
  double mu_inf = 0.0;
  double a = 0.0;  // mu_n - mu_inf ~ 1 / (a n + b)
  double b = 0.0;
  double residual = 0.0;  // max |model - mu_n| over the window
  bool decaying = false;  // false when the window is flat to round-off
  int window_first = 0;   // n range used
  int window_last = 0;
  std::size_t estimates = 0;  // number of non-degenerate triples
};

/// Limit of the trailing `window` levels under the error model
/// mu_n = mu_inf + 1/(a n + b). Requires equally spaced n in the window.
ExtrapolationFit extrapolate(const PuritySequence& seq, std::size_t window);
/// Same on raw data.
ExtrapolationFit extrapolate(const std::vector<int>& n, const std::vector<double>& mu);

/// One-body reduced state of a symmetric (q+n)-particle vector given by its
/// occupation-basis amplitudes.
DensityMatrix recover_state(const ComplexVector& psi, int d, int particles);

/// Occupation-basis amplitudes of phi^{(x) particles}.
ComplexVector lift_product_state(const ComplexVector& phi, int particles);

/// Adds one particle in mode phi to a symmetric vector and renormalizes.
ComplexVector add_particle(const ComplexVector& psi, const ComplexVector& phi, int d,
                           int particles);

/// Leading eigenvector of a density matrix.
ComplexVector dominant_state(const DensityMatrix& rho);

struct MopOptions {
  int n_max = 128;
  double eig_tol = 1e-12;
  std::size_t window = 8;
  std::uint64_t seed = 1;
  int restarts = 50;
};

struct MopResult {
  int q = 0;
  double nu_q = 0.0;  // mu_inf^{1/q}
  PuritySequence sequence;
  ExtrapolationFit fit;
  /// One-body state of the last eigenvector.
  DensityMatrix rho_opt = DensityMatrix::unchecked(ComplexMatrix());
  double rho_opt_value = 0.0;  // Tr[Phi(rho_opt)^q]
  /// Leading eigenvector of rho_opt: the optimal pure input. The one-body
  /// state keeps an O(1/n) admixture, its leading eigenvector does not.
  ComplexVector input_state;
  double input_state_value = 0.0;  // Tr[Phi(psi psi^dagger)^q]
  double certificate = 0.0;    // best local-search value
  ComplexVector certificate_state;
  double cross_tol = 0.0;
  bool certified = false;
  std::vector<std::string> diagnostics;
};

/// Global maximum of Tr[Phi(rho)^q] via the symmetric-extension hierarchy.
///
/// Pipeline: local search (for the certificate and to seed the first
/// eigensolve), lift, symmetrize for q > 2, compress, levels 1..n_max,
/// extrapolation of the trailing window, state recovery from the last level.
/// Checks: |Tr[Phi(psi psi^dagger)^q] - mu_inf| <= cross_tol for the recovered
/// input psi, and certificate <= mu_{n_max} + kMonotonicityTol.
/// Failed cross-checks do not throw; they leave certified = false with a
/// diagnostic explaining which check failed.
MopResult solve_max_output_purity(const QuantumChannel& channel, int q, const MopOptions& opts = {});

}  // namespace mop
