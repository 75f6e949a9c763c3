#include "mop/channel.hpp"

#include <cmath>
#include <random>
#include <sstream>

namespace mop {

namespace {

bool all_finite(const ComplexMatrix& m) {
  for (Eigen::Index i = 0; i < m.size(); ++i) {
    const Complex z = m.data()[i];
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
  }
  return true;
}

}  // namespace

double min_hermitian_eigenvalue(const ComplexMatrix& m) {
  const ComplexMatrix h = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(h, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

Complex trace_power(const ComplexMatrix& m, int q) {
  if (q < 1) throw std::invalid_argument("trace_power: q must be >= 1");
  ComplexMatrix acc = m;
  for (int i = 1; i < q; ++i) acc = (acc * m).eval();
  return acc.trace();
}

DensityMatrix DensityMatrix::from_matrix(ComplexMatrix m, double tol) {
  if (m.rows() != m.cols() || m.rows() == 0)
    throw std::invalid_argument("density matrix must be square and non-empty");
  if (!all_finite(m)) throw std::invalid_argument("density matrix has non-finite entries");
  const double herm = (m - m.adjoint()).cwiseAbs().maxCoeff();
  if (herm > kHermitianTol)
    throw std::invalid_argument("density matrix is not Hermitian (deviation " +
                                std::to_string(herm) + ")");
  const double tr = m.trace().real();
  if (std::abs(tr - 1.0) > kTraceTol)
    throw std::invalid_argument("density matrix trace is " + std::to_string(tr));
  const double lmin = min_hermitian_eigenvalue(m);
  if (lmin < -tol)
    throw std::invalid_argument("density matrix has negative eigenvalue " +
                                std::to_string(lmin));
  return DensityMatrix(std::move(m));
}

DensityMatrix DensityMatrix::pure(const ComplexVector& psi) {
  const double nrm = psi.norm();
  if (nrm == 0.0) throw std::invalid_argument("pure state from zero vector");
  const ComplexVector u = psi / nrm;
  return DensityMatrix(u * u.adjoint());
}

double DensityMatrix::purity() const {
  // Tr[rho^2] = sum |rho_ij|^2 for Hermitian rho
  return m_.squaredNorm();
}

ComplexMatrix ChoiMatrix::assembled() const {
  ComplexMatrix out(d * d, d * d);
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b) out.block(a * d, b * d, d, d) = block(a, b);
  return out;
}

double trace_preservation_deviation(const std::vector<ComplexMatrix>& kraus) {
  if (kraus.empty()) return 0.0;
  const auto d = kraus.front().rows();
  ComplexMatrix s = -ComplexMatrix::Identity(d, d);
  for (const auto& k : kraus) s += k.adjoint() * k;
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(0.5 * (s + s.adjoint()),
                                                  Eigen::EigenvaluesOnly);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

QuantumChannel validate_channel(std::vector<ComplexMatrix> kraus, double tol) {
  if (kraus.empty()) throw ChannelError("channel needs at least one Kraus operator");
  const auto d = kraus.front().rows();
  if (d < 1) throw ChannelError("Kraus operator 0 is empty");
  for (std::size_t m = 0; m < kraus.size(); ++m) {
    if (kraus[m].rows() != d || kraus[m].cols() != d) {
      std::ostringstream os;
      os << "Kraus operator " << m << " is " << kraus[m].rows() << "x" << kraus[m].cols()
         << ", expected " << d << "x" << d;
      throw ChannelError(os.str());
    }
    if (!all_finite(kraus[m]))
      throw ChannelError("Kraus operator " + std::to_string(m) + " has non-finite entries");
  }
  const double dev = trace_preservation_deviation(kraus);
  if (!(dev <= tol)) {
    std::ostringstream os;
    os.precision(6);
    os << "channel is not trace preserving: ||sum K^dagger K - I|| = " << dev
       << " exceeds tolerance " << tol;
    throw ChannelError(os.str());
  }
  return QuantumChannel(static_cast<int>(d), std::move(kraus));
}

QuantumChannel make_depolarizing(int d, double p) {
  if (d < 1) throw std::invalid_argument("make_depolarizing: d must be >= 1");
  if (!(p >= 0.0 && p <= 1.0))
    throw std::invalid_argument("make_depolarizing: p must lie in [0, 1]");
  // {sqrt(p) I} together with {sqrt((1-p)/d) E_ij}: the second family maps
  // rho to (1-p) Tr[rho] I/d.
  std::vector<ComplexMatrix> kraus;
  if (p > 0.0) kraus.push_back(std::sqrt(p) * ComplexMatrix::Identity(d, d));
  if (p < 1.0) {
    const double w = std::sqrt((1.0 - p) / d);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) {
        ComplexMatrix e = ComplexMatrix::Zero(d, d);
        e(i, j) = w;
        kraus.push_back(std::move(e));
      }
  }
  return validate_channel(std::move(kraus));
}

QuantumChannel make_random_channel(int d, int k, std::uint64_t seed) {
  if (d < 2) throw std::invalid_argument("make_random_channel: d must be >= 2");
  if (k < 1) throw std::invalid_argument("make_random_channel: k must be >= 1");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  ComplexMatrix g(k * d, d);
  for (Eigen::Index c = 0; c < g.cols(); ++c)
    for (Eigen::Index r = 0; r < g.rows(); ++r) g(r, c) = Complex(gauss(rng), gauss(rng));
  Eigen::HouseholderQR<ComplexMatrix> qr(g);
  const ComplexMatrix v = qr.householderQ() * ComplexMatrix::Identity(k * d, d);
  std::vector<ComplexMatrix> kraus;
  kraus.reserve(k);
  for (int m = 0; m < k; ++m) kraus.push_back(v.block(m * d, 0, d, d));
  return validate_channel(std::move(kraus));
}

QuantumChannel make_unitary_channel(const ComplexMatrix& u) {
  return validate_channel({u});
}

ChoiMatrix choi_of(const QuantumChannel& channel) {
  const int d = channel.dim();
  ChoiMatrix choi;
  choi.d = d;
  choi.blocks.reserve(static_cast<std::size_t>(d) * d);
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b) {
      ComplexMatrix blk = ComplexMatrix::Zero(d, d);
      // K E_ab K^dagger = (column a of K)(column b of K)^dagger
      for (const auto& k : channel.kraus()) blk += k.col(a) * k.col(b).adjoint();
      choi.blocks.push_back(std::move(blk));
    }
  return choi;
}

ComplexMatrix apply_channel(const QuantumChannel& channel, const ComplexMatrix& rho) {
  const int d = channel.dim();
  if (rho.rows() != d || rho.cols() != d)
    throw std::invalid_argument("apply: input is " + std::to_string(rho.rows()) + "x" +
                                std::to_string(rho.cols()) + ", channel dimension is " +
                                std::to_string(d));
  ComplexMatrix out = ComplexMatrix::Zero(d, d);
  for (const auto& k : channel.kraus()) out += k * rho * k.adjoint();
  return out;
}

DensityMatrix apply_channel(const QuantumChannel& channel, const DensityMatrix& rho) {
  return DensityMatrix::unchecked(apply_channel(channel, rho.matrix()));
}

ComplexMatrix apply_adjoint(const QuantumChannel& channel, const ComplexMatrix& x) {
  const int d = channel.dim();
  if (x.rows() != d || x.cols() != d)
    throw std::invalid_argument("apply_adjoint: dimension mismatch");
  ComplexMatrix out = ComplexMatrix::Zero(d, d);
  for (const auto& k : channel.kraus()) out += k.adjoint() * x * k;
  return out;
}

ComplexMatrix apply_via_choi(const ChoiMatrix& choi, const ComplexMatrix& rho) {
  const int d = choi.d;
  if (rho.rows() != d || rho.cols() != d)
    throw std::invalid_argument("apply_via_choi: dimension mismatch");
  ComplexMatrix out = ComplexMatrix::Zero(d, d);
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b) out += rho(a, b) * choi.block(a, b);
  return out;
}

}  // namespace mop
