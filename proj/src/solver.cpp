#include "mop/solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <set>
#include <sstream>

#include "mop/baseline.hpp"

namespace mop {

namespace {

// prod_j k_j (k_j - 1) ... (k_j - u_j + 1); zero when some u_j > k_j.
double falling(std::span<const int> k, std::span<const int> u) {
  double r = 1.0;
  for (std::size_t j = 0; j < k.size(); ++j)
    for (int s = 0; s < u[j]; ++s) r *= static_cast<double>(k[j] - s);
  return r;
}

}  // namespace

SparseHermitian assemble_level_operator(const CompressedOperator& b, int n) {
  if (n < 0) throw std::invalid_argument("assemble_level_operator: n must be >= 0");
  const int d = b.d;
  const int q = b.q;
  const OccupationBasis small(d, q);
  const OccupationBasis big(d, q + n);
  if (static_cast<std::size_t>(b.entries.rows()) != small.size())
    throw std::invalid_argument("assemble_level_operator: compressed operator has wrong size");

  // Q_{[k],[l]} = sum over [u],[v] with [k]-[u] = [l]-[v] >= 0 of
  //   C^n_{[k]-[u]} (C^q_[u] C^q_[v])^{1/2} B_{[u],[v]} / (C^{q+n}_[k] C^{q+n}_[l])^{1/2}.
  // The ratios C^n_{[k]-[u]} / C^{q+n}_[k] are ratios of falling factorials,
  // prod_j k_j!/(k_j-u_j)! divided by (q+n)!/n!, so nothing overflows.
  double total = 1.0;
  for (int t = 1; t <= q; ++t) total *= static_cast<double>(n + t);

  std::vector<double> small_norm(small.size());
  for (std::size_t u = 0; u < small.size(); ++u)
    small_norm[u] = std::sqrt(multinomial_double(q, small[u]));

  std::vector<std::vector<SparseHermitian::Entry>> rows(big.size());
  std::set<std::vector<int>> profile;
  OccupationIndex l(d);
  for (std::size_t row = 0; row < big.size(); ++row) {
    const auto k = big[row];
    auto& out = rows[row];
    for (std::size_t u = 0; u < small.size(); ++u) {
      const auto uu = small[u];
      bool fits = true;
      for (int j = 0; j < d; ++j) fits = fits && uu[j] <= k[j];
      if (!fits) continue;
      const double fk = falling(k, uu);
      for (std::size_t v = 0; v < small.size(); ++v) {
        const auto vv = small[v];
        for (int j = 0; j < d; ++j) l[j] = k[j] - uu[j] + vv[j];
        const double fl = falling(l, vv);
        const double coef = std::sqrt(fk * fl) / total * small_norm[u] * small_norm[v];
        out.push_back({big.position(l), coef * b.entries(static_cast<Eigen::Index>(u),
                                                           static_cast<Eigen::Index>(v))});
      }
    }
  }
  for (std::size_t u = 0; u < small.size(); ++u)
    for (std::size_t v = 0; v < small.size(); ++v) {
      std::vector<int> diff(d);
      for (int j = 0; j < d; ++j) diff[j] = small[v][j] - small[u][j];
      profile.insert(std::move(diff));
    }

  SparseHermitian q_n(std::move(rows));
  q_n.band_profile.assign(profile.begin(), profile.end());
  return q_n;
}

std::vector<int> dense_schedule(int n_max) {
  if (n_max < 1) throw std::invalid_argument("schedule: n_max must be >= 1");
  std::vector<int> s(n_max);
  for (int i = 0; i < n_max; ++i) s[i] = i + 1;
  return s;
}

std::vector<int> geometric_schedule(int n_max) {
  if (n_max < 1) throw std::invalid_argument("schedule: n_max must be >= 1");
  std::vector<int> s;
  for (int n = 1; n <= std::min(n_max, 32); ++n) s.push_back(n);
  for (int n = 64; n <= n_max; n *= 2) s.push_back(n);
  if (s.back() != n_max) s.push_back(n_max);
  return s;
}

ComplexVector lift_product_state(const ComplexVector& phi, int particles) {
  const int d = static_cast<int>(phi.size());
  const OccupationBasis basis(d, particles);
  const ComplexVector u = phi.normalized();
  ComplexVector c(static_cast<Eigen::Index>(basis.size()));
  for (std::size_t i = 0; i < basis.size(); ++i) {
    const auto k = basis[i];
    Complex amp = std::sqrt(multinomial_double(particles, k));
    for (int j = 0; j < d; ++j)
      for (int t = 0; t < k[j]; ++t) amp *= u[j];
    c[static_cast<Eigen::Index>(i)] = amp;
  }
  return c;
}

ComplexVector add_particle(const ComplexVector& psi, const ComplexVector& phi, int d,
                           int particles) {
  const OccupationBasis from(d, particles);
  const OccupationBasis to(d, particles + 1);
  if (static_cast<std::size_t>(psi.size()) != from.size())
    throw std::invalid_argument("add_particle: amplitude vector has wrong size");
  // a^dagger(phi) |[m]> = sum_j phi_j sqrt(m_j + 1) |[m] + e_j>
  ComplexVector out = ComplexVector::Zero(static_cast<Eigen::Index>(to.size()));
  OccupationIndex l(d);
  for (std::size_t i = 0; i < from.size(); ++i) {
    const auto m = from[i];
    for (int j = 0; j < d; ++j) {
      if (phi[j] == Complex(0.0)) continue;
      std::copy(m.begin(), m.end(), l.begin());
      ++l[j];
      out[static_cast<Eigen::Index>(to.position(l))] +=
          phi[j] * std::sqrt(static_cast<double>(l[j])) * psi[static_cast<Eigen::Index>(i)];
    }
  }
  const double nrm = out.norm();
  if (nrm == 0.0) throw std::invalid_argument("add_particle: result vanishes");
  return out / nrm;
}

DensityMatrix recover_state(const ComplexVector& psi, int d, int particles) {
  if (particles < 1) throw std::invalid_argument("recover_state: need at least one particle");
  const OccupationBasis basis(d, particles);
  if (static_cast<std::size_t>(psi.size()) != basis.size())
    throw std::invalid_argument("recover_state: amplitude vector has wrong size");
  // rho_ab = <a_b^dagger a_a> / N
  ComplexMatrix rho = ComplexMatrix::Zero(d, d);
  OccupationIndex l(d);
  for (std::size_t i = 0; i < basis.size(); ++i) {
    const auto m = basis[i];
    const Complex c = psi[static_cast<Eigen::Index>(i)];
    if (c == Complex(0.0)) continue;
    for (int a = 0; a < d; ++a) {
      if (m[a] == 0) continue;
      for (int b = 0; b < d; ++b) {
        std::copy(m.begin(), m.end(), l.begin());
        --l[a];
        ++l[b];
        const double w = std::sqrt(static_cast<double>(m[a]) * (m[b] + 1 - (a == b ? 1 : 0)));
        rho(a, b) += std::conj(psi[static_cast<Eigen::Index>(basis.position(l))]) * c * w;
      }
    }
  }
  rho /= static_cast<double>(particles);
  return DensityMatrix::unchecked(std::move(rho));
}

ComplexVector dominant_state(const DensityMatrix& rho) {
  const ComplexMatrix& m = rho.matrix();
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(0.5 * (m + m.adjoint()));
  return es.eigenvectors().col(m.rows() - 1);
}

PuritySequence purity_sequence(const CompressedOperator& b, const std::vector<int>& schedule,
                               const SequenceOptions& opts) {
  if (schedule.empty()) throw std::invalid_argument("purity_sequence: empty schedule");
  for (std::size_t i = 0; i < schedule.size(); ++i) {
    if (schedule[i] < 0 || (i > 0 && schedule[i] <= schedule[i - 1]))
      throw std::invalid_argument("purity_sequence: schedule must be strictly increasing");
  }
  const int d = b.d;
  const int q = b.q;
  PuritySequence seq{d, q, {}};
  seq.levels.reserve(schedule.size());

  std::optional<ComplexVector> start;
  if (opts.seed_state) start = lift_product_state(*opts.seed_state, q + schedule.front());

  LanczosOptions lo;
  lo.tol = opts.eig_tol;
  lo.max_iter = opts.max_iter;
  lo.seed = opts.seed;

  for (int n : schedule) {
    const auto t0 = std::chrono::steady_clock::now();
    const SparseHermitian q_n = assemble_level_operator(b, n);
    Eigenpair ep = largest_eigenpair(q_n, lo, start);
    const auto t1 = std::chrono::steady_clock::now();
    if (!ep.converged) {
      std::ostringstream os;
      os << "level n=" << n << ": eigensolver did not converge after " << ep.iterations
         << " products (best residual " << ep.residual << ")";
      throw SolverError(os.str(), n);
    }
    if (!seq.levels.empty() && ep.value > seq.levels.back().mu + kMonotonicityTol) {
      std::ostringstream os;
      os.precision(17);
      os << "level n=" << n << ": mu increased from " << seq.levels.back().mu << " to "
         << ep.value;
      throw SolverError(os.str(), n);
    }

    LevelResult lr;
    lr.n = n;
    lr.dim = q_n.dim();
    lr.mu = ep.value;
    lr.psi = std::move(ep.vector);
    lr.iterations = ep.iterations;
    lr.residual = ep.residual;
    lr.wall_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
    seq.levels.push_back(std::move(lr));

    // Warm start for the next level: append particles in the dominant mode.
    const auto& last = seq.levels.back();
    const int particles = q + n;
    const auto next = std::upper_bound(schedule.begin(), schedule.end(), n);
    if (next != schedule.end()) {
      const ComplexVector phi = dominant_state(recover_state(last.psi, d, particles));
      ComplexVector v = last.psi;
      for (int p = particles; p < q + *next; ++p) v = add_particle(v, phi, d, p);
      start = std::move(v);
    }
  }
  return seq;
}

MopResult solve_max_output_purity(const QuantumChannel& channel, int q, const MopOptions& opts) {
  if (q < 2 || q > 4) throw std::invalid_argument("solve: q must be 2, 3 or 4");
  if (opts.window < 3) throw std::invalid_argument("solve: window must be >= 3");
  if (opts.n_max < static_cast<int>(opts.window))
    throw std::invalid_argument("solve: n_max must be >= window");
  if (!(opts.eig_tol > 0.0)) throw std::invalid_argument("solve: eig_tol must be > 0");

  MopResult res;
  res.q = q;

  const SearchResult local = local_search(channel, q, opts.restarts, opts.seed);
  res.certificate = local.value;
  res.certificate_state = local.psi;

  LiftedOperator a = lift_channel(choi_of(channel), q);
  if (q > 2) a = symmetrize(a);
  const CompressedOperator b = compress(a);

  SequenceOptions so;
  so.eig_tol = opts.eig_tol;
  so.seed = opts.seed;
  so.seed_state = local.psi;
  res.sequence = purity_sequence(b, dense_schedule(opts.n_max), so);
  res.fit = extrapolate(res.sequence, opts.window);
  res.nu_q = std::pow(std::max(res.fit.mu_inf, 0.0), 1.0 / q);

  const auto& last = res.sequence.levels.back();
  res.rho_opt = recover_state(last.psi, channel.dim(), q + last.n);
  res.rho_opt_value = trace_power(apply_channel(channel, res.rho_opt.matrix()), q).real();
  res.input_state = dominant_state(res.rho_opt);
  res.input_state_value = output_purity(channel, res.input_state, q);
  res.cross_tol = std::max(1e-6, 10.0 * res.fit.residual);

  res.certified = true;
  std::ostringstream os;
  os.precision(12);
  if (std::abs(res.input_state_value - res.fit.mu_inf) > res.cross_tol) {
    os << "recovered input reaches " << res.input_state_value << ", extrapolated limit is "
       << res.fit.mu_inf << " (tolerance " << res.cross_tol << ")";
    res.diagnostics.push_back(os.str());
    os.str("");
    res.certified = false;
  }
  if (res.certificate > last.mu + kMonotonicityTol) {
    os << "local search value " << res.certificate << " exceeds mu_" << last.n << " = "
       << last.mu;
    res.diagnostics.push_back(os.str());
    res.certified = false;
  }
  return res;
}

}  // namespace mop
