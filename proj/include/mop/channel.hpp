#pragma once

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace mop {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

// Numerical tolerances for channel and state validation.
inline constexpr double kTracePreservationTol = 1e-10;
inline constexpr double kHermitianTol = 1e-10;
inline constexpr double kTraceTol = 1e-10;
inline constexpr double kPsdTol = 1e-10;

class ChannelError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Completely positive trace-preserving map on d x d matrices, given by
/// Kraus operators K_m with sum_m K_m^dagger K_m = I.
///
/// Instances are only produced by validate_channel() and the generators
/// below, so every QuantumChannel in circulation satisfies its invariants.
class QuantumChannel {
 public:
  int dim() const { return dim_; }
  const std::vector<ComplexMatrix>& kraus() const { return kraus_; }

 private:
  QuantumChannel(int dim, std::vector<ComplexMatrix> kraus)
      : dim_(dim), kraus_(std::move(kraus)) {}

  friend QuantumChannel validate_channel(std::vector<ComplexMatrix> kraus,
                                         double tol);

  int dim_;
  std::vector<ComplexMatrix> kraus_;
};

/// Unit-trace positive semidefinite Hermitian matrix.
class DensityMatrix {
 public:
  /// Validates Hermiticity, trace and positivity against the given tolerances.
  static DensityMatrix from_matrix(ComplexMatrix m, double tol = kPsdTol);
  /// Projector onto a normalized copy of psi.
  static DensityMatrix pure(const ComplexVector& psi);
  /// Wraps without checks. Used for outputs whose validity follows from
  /// construction (channel outputs, reduced states).
  static DensityMatrix unchecked(ComplexMatrix m) { return DensityMatrix(std::move(m)); }

  int dim() const { return static_cast<int>(m_.rows()); }
  const ComplexMatrix& matrix() const { return m_; }
  Complex operator()(int r, int c) const { return m_(r, c); }

  /// Tr[rho^2].
  double purity() const;

 private:
  explicit DensityMatrix(ComplexMatrix m) : m_(std::move(m)) {}
  ComplexMatrix m_;
};

/// Choi representation: block (a,b) holds Phi(E_ab) for the matrix unit E_ab.
/// Then Phi(rho)_ij = sum_ab block(a,b)_ij rho_ab.
struct ChoiMatrix {
  int d = 0;
  std::vector<ComplexMatrix> blocks;  // row-major over (a,b)

  const ComplexMatrix& block(int a, int b) const { return blocks[a * d + b]; }
  /// d^2 x d^2 matrix sum_ab E_ab (x) Phi(E_ab); row index a*d+i, column b*d+j.
  ComplexMatrix assembled() const;
};

/// Largest singular value of sum K^dagger K - I.
double trace_preservation_deviation(const std::vector<ComplexMatrix>& kraus);

QuantumChannel validate_channel(std::vector<ComplexMatrix> kraus,
                                double tol = kTracePreservationTol);

/// rho -> p rho + (1-p) I/d.
QuantumChannel make_depolarizing(int d, double p);

/// Kraus operators are the d x d blocks of a random isometry C^d -> C^{kd},
/// obtained by orthonormalizing a complex Gaussian (kd) x d matrix.
QuantumChannel make_random_channel(int d, int k, std::uint64_t seed);

/// Single-Kraus channel rho -> U rho U^dagger.
QuantumChannel make_unitary_channel(const ComplexMatrix& u);

ChoiMatrix choi_of(const QuantumChannel& channel);

/// sum_m K_m rho K_m^dagger for arbitrary square rho.
ComplexMatrix apply_channel(const QuantumChannel& channel, const ComplexMatrix& rho);
DensityMatrix apply_channel(const QuantumChannel& channel, const DensityMatrix& rho);

/// Adjoint (Heisenberg-picture) map X -> sum_m K_m^dagger X K_m.
ComplexMatrix apply_adjoint(const QuantumChannel& channel, const ComplexMatrix& x);

/// Phi(rho) evaluated through the Choi blocks.
ComplexMatrix apply_via_choi(const ChoiMatrix& choi, const ComplexMatrix& rho);

/// Smallest eigenvalue of the Hermitian part of m (dense).
double min_hermitian_eigenvalue(const ComplexMatrix& m);

/// Tr[m^q] for a square matrix and integer q >= 1.
Complex trace_power(const ComplexMatrix& m, int q);

// JSON channel file format:
//   {"d": <int>, "kraus": [ [[ [re,im], ... ], ... ], ... ]}
// with each Kraus operator stored as a list of rows.
/// Parses the Kraus list without checking trace preservation.
std::vector<ComplexMatrix> kraus_from_json(const std::string& text);
QuantumChannel channel_from_json(const std::string& text);
std::string channel_to_json(const QuantumChannel& channel);
QuantumChannel load_channel_file(const std::string& path);

}  // namespace mop
