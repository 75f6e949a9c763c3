// Acceptance checks. Prints one PASS/FAIL line per criterion; exits non-zero
// if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "mop/baseline.hpp"
#include "mop/occupation.hpp"
#include "mop/solver.hpp"

using namespace mop;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Outcome {
  bool pass = true;
  std::string detail;
};

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0, double d = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c, d);
  return buf;
}

CompressedOperator compressed(const QuantumChannel& ch, int q) {
  LiftedOperator a = lift_channel(choi_of(ch), q);
  if (q > 2) a = symmetrize(a);
  return compress(a);
}

// 1. Identity qubit channel.
Outcome identity_channel() {
  const auto t0 = Clock::now();
  MopOptions o;
  o.n_max = 64;
  const MopResult r = solve_max_output_purity(make_depolarizing(2, 1.0), 2, o);
  double worst = 0.0;
  for (const auto& l : r.sequence.levels) worst = std::max(worst, std::abs(l.mu - 1.0));
  const double secs = seconds_since(t0);
  Outcome out;
  out.pass = r.sequence.levels.size() == 64 && worst <= 1e-12 &&
             std::abs(r.nu_q - 1.0) <= 1e-12 && secs < 5.0;
  out.detail = fmt("max|mu_n-1|=%.2e nu_2=%.15f time=%.3fs", worst, r.nu_q, secs);
  return out;
}

// 2. Depolarizing channels against (1+p^2)/2.
Outcome depolarizing_limits() {
  Outcome out;
  for (double p : {0.25, 0.5, 0.75}) {
    const auto t0 = Clock::now();
    const MopResult r = solve_max_output_purity(make_depolarizing(2, p), 2);
    const double secs = seconds_since(t0);
    const double err = std::abs(r.fit.mu_inf - (1 + p * p) / 2);
    out.pass = out.pass && err <= 1e-8 && secs < 30.0;
    out.detail += fmt("p=%.2f err=%.2e (%.2fs) ", p, err, secs);
  }
  return out;
}

// 3. Sparse level operators against the dense construction.
Outcome oracle_equivalence() {
  const auto t0 = Clock::now();
  struct Case {
    int d, q, n_max;
  };
  double worst = 0.0;
  for (const Case c : {Case{2, 2, 4}, Case{2, 3, 3}, Case{3, 2, 2}}) {
    const LiftedOperator a = lift_channel(choi_of(make_random_channel(c.d, 4, 500 + c.d + c.q)), c.q);
    const CompressedOperator b = compress(c.q > 2 ? symmetrize(a) : a);
    for (int n = 1; n <= c.n_max; ++n) {
      const ComplexMatrix diff =
          assemble_level_operator(b, n).to_dense() - dense_lift_oracle(a, n);
      worst = std::max(worst, diff.cwiseAbs().maxCoeff());
    }
  }
  const double secs = seconds_since(t0);
  return {worst <= 1e-12 && secs < 60.0, fmt("max entry difference=%.2e time=%.2fs", worst, secs)};
}

std::vector<PuritySequence> g_random_sequences;

// 4. Monotonicity on 20 random qubit channels.
Outcome monotonicity() {
  int violations = 0;
  double worst_step = -1.0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const QuantumChannel ch = make_random_channel(2, 4, seed);
    PuritySequence s;
    try {
      s = purity_sequence(compressed(ch, 2), dense_schedule(32));
    } catch (const SolverError& e) {
      ++violations;
      std::printf("  seed %llu: %s\n", static_cast<unsigned long long>(seed), e.what());
      g_random_sequences.push_back({});
      continue;
    }
    for (std::size_t i = 1; i < s.levels.size(); ++i) {
      const double step = s.levels[i].mu - s.levels[i - 1].mu;
      worst_step = std::max(worst_step, step);
      if (step > 1e-10) ++violations;
    }
    g_random_sequences.push_back(std::move(s));
  }
  return {violations == 0, fmt("violations=%.0f largest step=%.2e", violations, worst_step)};
}

// 5. Local search and Bloch grid against the same sequences.
Outcome brackets() {
  int below = 0;
  double worst_fit = 0.0, worst_slack = 0.0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const PuritySequence& s = g_random_sequences.at(seed - 1);
    if (s.levels.empty()) return {false, "missing sequence"};
    const QuantumChannel ch = make_random_channel(2, 4, seed);
    const double l = local_search(ch, 2, 50, seed).value;
    for (const auto& lvl : s.levels)
      if (l > lvl.mu + 1e-10) ++below;
    const GridBracket g = bloch_grid_oracle(ch, 2, 1000);
    const ExtrapolationFit fit = extrapolate(s, 8);
    worst_fit = std::max(worst_fit, std::abs(fit.mu_inf - g.lower));
    worst_slack = std::max(worst_slack, g.upper - g.lower);
  }
  return {below == 0 && worst_fit <= 1e-5,
          fmt("L>mu_n count=%.0f max|mu_inf-G|=%.2e grid slack<=%.2e", below, worst_fit,
              worst_slack)};
}

// 6. n (mu_n - 0.625) at n = 64 and 128 for depolarizing p = 0.5.
Outcome error_law() {
  const CompressedOperator b = compressed(make_depolarizing(2, 0.5), 2);
  const PuritySequence s = purity_sequence(b, dense_schedule(128));
  const double e64 = 64 * (s.levels[63].mu - 0.625);
  const double e128 = 128 * (s.levels[127].mu - 0.625);
  // Quantities below n * eig_tol carry no information beyond the solver's
  // resolution: both are zero to working precision and hence equal.
  const double floor64 = 64 * 1e-12, floor128 = 128 * 1e-12;
  const bool resolved = std::abs(e64) > floor64 || std::abs(e128) > floor128;
  const bool ratio_ok = std::abs(e64 - e128) < 0.2 * std::max(std::abs(e64), std::abs(e128));
  Outcome out;
  out.pass = resolved ? ratio_ok : true;
  out.detail = fmt("64*(mu_64-0.625)=%.3e 128*(mu_128-0.625)=%.3e", e64, e128);
  out.detail += resolved ? " (relative comparison)" : " (both zero to solver precision)";

  // Same quantity on a channel with a decaying sequence, for reference.
  const PuritySequence r = purity_sequence(compressed(make_random_channel(2, 4, 1), 2),
                                           dense_schedule(128));
  const double lim = extrapolate(r, 8).mu_inf;
  const double r64 = 64 * (r.levels[63].mu - lim), r128 = 128 * (r.levels[127].mu - lim);
  out.detail += fmt("; random channel: %.4e vs %.4e (rel. diff %.2f%%)", r64, r128,
                    100 * std::abs(r64 - r128) / std::max(r64, r128));
  return out;
}

// 7. Synthetic sequences c + 1/(a n + b).
Outcome synthetic_extrapolation() {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> uc(0.0, 1.0), uab(0.1, 10.0);
  double worst = 0.0;
  for (int t = 0; t < 10; ++t) {
    const double c = uc(rng), a = uab(rng), b = uab(rng);
    PuritySequence s;
    for (int n = 1; n <= 32; ++n) {
      LevelResult l;
      l.n = n;
      l.mu = c + 1.0 / (a * n + b);
      s.levels.push_back(l);
    }
    const ExtrapolationFit f = extrapolate(s, 8);
    worst = std::max({worst, std::abs(f.mu_inf - c), std::abs(f.a - a), std::abs(f.b - b)});
  }
  return {worst <= 1e-9, fmt("max parameter error=%.2e", worst)};
}

// 8. State recovery.
Outcome state_recovery() {
  std::mt19937_64 rng(99);
  std::normal_distribution<double> g(0.0, 1.0);
  double worst = 0.0;
  for (int particles = 2; particles <= 6; ++particles) {
    const OccupationBasis basis(2, particles);
    const std::size_t full_dim = std::size_t{1} << particles;
    for (int t = 0; t < 10; ++t) {
      ComplexVector c(static_cast<Eigen::Index>(basis.size()));
      for (auto& z : c) z = Complex(g(rng), g(rng));
      c.normalize();
      // Expand into the full tensor space: amplitude of a bit string is
      // c_[k] / sqrt(binomial(N, k_1)) with k_1 its number of ones.
      ComplexVector full(static_cast<Eigen::Index>(full_dim));
      for (std::size_t idx = 0; idx < full_dim; ++idx) {
        const int ones = __builtin_popcountll(idx);
        const int k[2] = {particles - ones, ones};
        double binom = 1.0;
        for (int j = 1; j <= ones; ++j) binom = binom * (particles - ones + j) / j;
        full[idx] = c[basis.position(k)] / std::sqrt(binom);
      }
      ComplexMatrix brute = ComplexMatrix::Zero(2, 2);
      const std::size_t half = full_dim / 2;
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
          for (std::size_t r = 0; r < half; ++r)
            brute(a, b) += full[a * half + r] * std::conj(full[b * half + r]);
      const ComplexMatrix diff = recover_state(c, 2, particles).matrix() - brute;
      worst = std::max(worst, diff.cwiseAbs().maxCoeff());
    }
  }
  const MopResult r = solve_max_output_purity(make_depolarizing(2, 0.5), 2);
  return {worst <= 1e-12 && r.rho_opt_value >= 0.625 - 1e-3,
          fmt("max |recovered-brute|=%.2e Tr[Phi(rho_opt)^2]=%.12f", worst, r.rho_opt_value)};
}

// 9. Eigensolve time per doubling of n.
Outcome scaling() {
  const CompressedOperator b = compressed(make_random_channel(2, 4, 1), 2);
  std::vector<double> times;
  for (int n : {256, 512, 1024, 2048}) {
    const SparseHermitian q = assemble_level_operator(b, n);
    double best = 1e300;
    for (int rep = 0; rep < 3; ++rep) {
      const auto t0 = Clock::now();
      const Eigenpair e = largest_eigenpair(q);
      best = std::min(best, seconds_since(t0));
      if (!e.converged) return {false, "eigensolver did not converge at n=" + std::to_string(n)};
    }
    times.push_back(best);
  }
  double worst = 0.0;
  std::string detail = "times(ms):";
  for (double t : times) detail += fmt(" %.2f", 1e3 * t);
  detail += " ratios:";
  for (std::size_t i = 1; i < times.size(); ++i) {
    const double ratio = times[i] / times[i - 1];
    worst = std::max(worst, ratio);
    detail += fmt(" %.2f", ratio);
  }
  return {worst <= 4.5, detail};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"identity channel: mu_n = 1 for n <= 64, nu_2 = 1", identity_channel},
      {"depolarizing limits (1+p^2)/2 within 1e-8", depolarizing_limits},
      {"level operators match the dense oracle within 1e-12", oracle_equivalence},
      {"monotone sequences for 20 random qubit channels", monotonicity},
      {"local search below every level, fit within 1e-5 of grid", brackets},
      {"n (mu_n - 0.625) agrees at n = 64 and 128", error_law},
      {"synthetic extrapolation recovers (c, a, b) within 1e-9", synthetic_extrapolation},
      {"state recovery matches brute force; depolarizing optimum", state_recovery},
      {"eigensolve time grows <= 4.5x per doubling of n", scaling},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failures;
    std::printf("%s criterion %zu: %s -- %s\n", o.pass ? "PASS" : "FAIL", i + 1,
                criteria[i].first, o.detail.c_str());
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
