#include "mop/baseline.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

namespace mop {

namespace {

ComplexMatrix output_of(const QuantumChannel& channel, const ComplexVector& psi) {
  return apply_channel(channel, ComplexMatrix(psi * psi.adjoint()));
}

ComplexVector random_unit(int d, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  ComplexVector v(d);
  for (int i = 0; i < d; ++i) v[i] = Complex(gauss(rng), gauss(rng));
  return v.normalized();
}

// Tr[M^q] for a 2x2 Hermitian matrix from its eigenvalues.
double trace_power_2x2(double m00, double m11, Complex m01, int q) {
  const double half_tr = 0.5 * (m00 + m11);
  const double gap = std::sqrt(0.25 * (m00 - m11) * (m00 - m11) + std::norm(m01));
  return std::pow(half_tr + gap, q) + std::pow(half_tr - gap, q);
}

}  // namespace

double output_purity(const QuantumChannel& channel, const ComplexVector& psi, int q) {
  return trace_power(output_of(channel, psi.normalized()), q).real();
}

ComplexVector ascent_direction(const QuantumChannel& channel, const ComplexVector& psi, int q) {
  const ComplexMatrix out = output_of(channel, psi);
  ComplexMatrix power = ComplexMatrix::Identity(out.rows(), out.cols());
  for (int t = 1; t < q; ++t) power = (power * out).eval();
  return static_cast<double>(q) * (apply_adjoint(channel, power) * psi);
}

SearchResult local_search(const QuantumChannel& channel, int q, int restarts, std::uint64_t seed) {
  if (restarts < 1) throw std::invalid_argument("local_search: restarts must be >= 1");
  if (q < 1) throw std::invalid_argument("local_search: q must be >= 1");
  constexpr double kMinGain = 1e-14;
  constexpr int kMaxIter = 10000;

  std::mt19937_64 rng(seed);
  SearchResult best;
  best.value = -1.0;
  int converged = 0;
  for (int r = 0; r < restarts; ++r) {
    ComplexVector psi = random_unit(channel.dim(), rng);
    double value = output_purity(channel, psi, q);
    bool stationary = false;
    for (int it = 0; it < kMaxIter; ++it) {
      const ComplexVector next = ascent_direction(channel, psi, q).normalized();
      const double next_value = output_purity(channel, next, q);
      const double gain = next_value - value;
      if (next_value >= value) {
        psi = next;
        value = next_value;
      }
      if (gain < kMinGain) {
        stationary = true;
        break;
      }
    }
    if (stationary) ++converged;
    if (value > best.value) {
      best.value = value;
      best.psi = psi;
    }
  }
  best.restarts_used = restarts;
  best.converged_fraction = static_cast<double>(converged) / restarts;
  return best;
}

GridBracket bloch_grid_oracle(const QuantumChannel& channel, int q, int resolution) {
  if (channel.dim() != 2) throw std::invalid_argument("bloch_grid_oracle: qubit channels only");
  if (resolution < 3) throw std::invalid_argument("bloch_grid_oracle: resolution must be >= 3");
  const ChoiMatrix choi = choi_of(channel);
  const double dtheta = std::numbers::pi / (resolution - 1);
  const double dphi = 2.0 * std::numbers::pi / resolution;

  const int res = resolution;
  std::vector<double> f(static_cast<std::size_t>(res) * res);
  GridBracket out;
  out.lower = -1.0;
  for (int i = 0; i < res; ++i) {
    const double theta = i * dtheta;
    const double c = std::cos(0.5 * theta), s = std::sin(0.5 * theta);
    for (int j = 0; j < res; ++j) {
      const double phi = j * dphi;
      const Complex psi1 = std::polar(s, phi);
      // Phi(psi psi^dagger) = sum_ab psi_a conj(psi_b) block(a,b)
      const Complex w00 = c * c, w11 = std::norm(psi1), w01 = c * std::conj(psi1);
      const ComplexMatrix m = w00 * choi.block(0, 0) + w11 * choi.block(1, 1) +
                              w01 * choi.block(0, 1) + std::conj(w01) * choi.block(1, 0);
      const double v = trace_power_2x2(m(0, 0).real(), m(1, 1).real(), m(0, 1), q);
      f[static_cast<std::size_t>(i) * res + j] = v;
      if (v > out.lower) {
        out.lower = v;
        out.theta = theta;
        out.phi = phi;
      }
    }
  }

  // Largest second difference per unit angle^2 in each direction bounds the
  // loss between the true maximizer and its nearest grid point.
  double k_theta = 0.0, k_phi = 0.0;
  for (int i = 0; i < res; ++i)
    for (int j = 0; j < res; ++j) {
      const double mid = f[static_cast<std::size_t>(i) * res + j];
      if (i > 0 && i + 1 < res) {
        const double dd = f[static_cast<std::size_t>(i - 1) * res + j] - 2 * mid +
                          f[static_cast<std::size_t>(i + 1) * res + j];
        k_theta = std::max(k_theta, std::abs(dd));
      }
      const double dd = f[static_cast<std::size_t>(i) * res + (j + res - 1) % res] - 2 * mid +
                        f[static_cast<std::size_t>(i) * res + (j + 1) % res];
      k_phi = std::max(k_phi, std::abs(dd));
    }
  k_theta /= dtheta * dtheta;
  k_phi /= dphi * dphi;
  // Factor 2 covers the second differences underestimating the curvature
  // between grid points.
  const double slack = 2.0 * 0.5 *
                       (k_theta * 0.25 * dtheta * dtheta + k_phi * 0.25 * dphi * dphi);
  out.upper = out.lower + slack;
  return out;
}

ComplexMatrix dense_lift_oracle(const LiftedOperator& a, int n) {
  if (n < 0) throw std::invalid_argument("dense_lift_oracle: n must be >= 0");
  const int d = a.d;
  const std::size_t full = tensor_power_dim(d, a.q + n);
  const std::size_t outer = tensor_power_dim(d, a.q);
  const std::size_t inner = full / outer;
  const ComplexMatrix p = symmetric_isometry(d, a.q + n);

  // (A (x) I) x: view x as a (d^q) x (d^n) row-major array, the leading
  // tensor factors being the most significant digits.
  using RowMajor = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  ComplexMatrix ap(full, p.cols());
  for (Eigen::Index col = 0; col < p.cols(); ++col) {
    const ComplexVector x = p.col(col);
    Eigen::Map<const RowMajor> xs(x.data(), outer, inner);
    RowMajor ys = a.entries * xs;
    ap.col(col) = Eigen::Map<const ComplexVector>(ys.data(), full);
  }
  return p.adjoint() * ap;
}

}  // namespace mop
