#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <Eigen/Dense>

#include "mop/solver.hpp"

namespace mop {

namespace {

// Below this the second difference is treated as zero: the window is flat.
constexpr double kFlatDenominator = 1e-15;

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

struct Model {
  double c = 0.0, a = 0.0, b = 0.0;
};

bool valid(const Model& m, const std::vector<int>& n) {
  if (!std::isfinite(m.c) || !std::isfinite(m.a) || !std::isfinite(m.b) || !(m.a > 0.0))
    return false;
  for (int k : n)
    if (!(m.a * k + m.b > 0.0)) return false;
  return true;
}

double model_residual(const Model& m, const std::vector<int>& n, const std::vector<double>& mu) {
  double r = 0.0;
  for (std::size_t i = 0; i < n.size(); ++i)
    r = std::max(r, std::abs(mu[i] - m.c - 1.0 / (m.a * n[i] + m.b)));
  return r;
}

// a and b from successive differences, which do not involve the limit:
// D_n = mu_n - mu_{n+h} = a h eps_n eps_{n+h}, and D_n / D_{n+h} - 1 =
// 2h / (n + b/a).
bool difference_estimate(const std::vector<int>& n, const std::vector<double>& mu, int h,
                         Model& m) {
  std::vector<double> beta;
  for (std::size_t i = 0; i + 2 < mu.size(); ++i) {
    const double d0 = mu[i] - mu[i + 1], d1 = mu[i + 1] - mu[i + 2];
    if (!(d0 > 0.0 && d1 > 0.0)) return false;
    const double r = d0 / d1 - 1.0;
    if (!(r > 0.0)) return false;
    beta.push_back(2.0 * h / r - n[i]);
  }
  const double bt = median(beta);
  std::vector<double> as;
  for (std::size_t i = 0; i + 1 < mu.size(); ++i) {
    const double d = mu[i] - mu[i + 1];
    as.push_back(h / (d * (n[i] + bt) * (n[i] + h + bt)));
  }
  m.a = median(as);
  m.b = m.a * bt;
  std::vector<double> cs;
  for (std::size_t i = 0; i < mu.size(); ++i) cs.push_back(mu[i] - 1.0 / (m.a * n[i] + m.b));
  m.c = median(cs);
  return valid(m, n);
}

// Least squares for 1/(mu_n - c) = a n + b with c fixed.
bool reciprocal_estimate(const std::vector<int>& n, const std::vector<double>& mu, double c,
                         Model& m) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  std::size_t cnt = 0;
  for (std::size_t i = 0; i < mu.size(); ++i) {
    const double e = mu[i] - c;
    if (!(e > 0.0)) continue;
    const double x = n[i], y = 1.0 / e;
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++cnt;
  }
  const double det = cnt * sxx - sx * sx;
  if (cnt < 2 || !(det > 0.0)) return false;
  m.c = c;
  m.a = (cnt * sxy - sx * sy) / det;
  m.b = (sy - m.a * sx) / cnt;
  return valid(m, n);
}

// Polishes (c, a, b) by Gauss-Newton on the residuals in mu, keeping a step
// only if it does not increase the largest residual.
void gauss_newton(const std::vector<int>& n, const std::vector<double>& mu, Model& m) {
  const auto rows = static_cast<Eigen::Index>(n.size());
  double best = model_residual(m, n, mu);
  for (int it = 0; it < 8 && best > 0.0; ++it) {
    Eigen::MatrixXd jac(rows, 3);
    Eigen::VectorXd res(rows);
    for (Eigen::Index i = 0; i < rows; ++i) {
      const double e = 1.0 / (m.a * n[i] + m.b);
      res[i] = mu[i] - m.c - e;
      jac(i, 0) = 1.0;
      jac(i, 1) = -n[i] * e * e;
      jac(i, 2) = -e * e;
    }
    const Eigen::Vector3d step = jac.colPivHouseholderQr().solve(res);
    const Model next{m.c + step[0], m.a + step[1], m.b + step[2]};
    if (!valid(next, n)) break;
    const double r = model_residual(next, n, mu);
    if (r > best) break;
    m = next;
    best = r;
  }
}

double max_deviation(const ExtrapolationFit& fit, const std::vector<int>& n,
                     const std::vector<double>& mu) {
  double r = 0.0;
  for (std::size_t i = 0; i < mu.size(); ++i) {
    double model = fit.mu_inf;
    if (fit.decaying) model += 1.0 / (fit.a * n[i] + fit.b);
    r = std::max(r, std::abs(model - mu[i]));
  }
  return r;
}

}  // namespace

ExtrapolationFit extrapolate(const std::vector<int>& n, const std::vector<double>& mu) {
  if (n.size() != mu.size()) throw std::invalid_argument("extrapolate: size mismatch");
  if (n.size() < 3) throw std::invalid_argument("extrapolate: need at least 3 levels");
  const int h = n[1] - n[0];
  if (h <= 0) throw std::invalid_argument("extrapolate: n must increase");
  for (std::size_t i = 1; i < n.size(); ++i)
    if (n[i] - n[i - 1] != h)
      throw std::invalid_argument("extrapolate: window is not equally spaced");

  ExtrapolationFit fit;
  fit.window_first = n.front();
  fit.window_last = n.back();

  // If eps_n = 1/(a n + b) exactly, then 1/eps is linear in n and each
  // equally spaced triple determines the limit in closed form.
  std::vector<double> est;
  for (std::size_t i = 0; i + 2 < mu.size(); ++i) {
    const double y1 = mu[i], y2 = mu[i + 1], y3 = mu[i + 2];
    const double den = 2.0 * y2 - y1 - y3;
    if (std::abs(den) < kFlatDenominator) continue;
    est.push_back((y2 * (y1 + y3) - 2.0 * y1 * y3) / den);
  }
  fit.estimates = est.size();

  if (est.empty()) {
    fit.mu_inf = mu.back();
    fit.residual = max_deviation(fit, n, mu);
    return fit;
  }
  fit.mu_inf = median(est);

  Model m;
  if (!difference_estimate(n, mu, h, m) && !reciprocal_estimate(n, mu, fit.mu_inf, m)) {
    fit.residual = max_deviation(fit, n, mu);
    return fit;
  }
  gauss_newton(n, mu, m);
  fit.mu_inf = m.c;
  fit.a = m.a;
  fit.b = m.b;
  fit.decaying = true;
  fit.residual = max_deviation(fit, n, mu);
  return fit;
}

ExtrapolationFit extrapolate(const PuritySequence& seq, std::size_t window) {
  if (window < 3) throw std::invalid_argument("extrapolate: window must be >= 3");
  if (seq.levels.size() < window)
    throw std::invalid_argument("extrapolate: fewer levels than the window");
  std::vector<int> n;
  std::vector<double> mu;
  for (std::size_t i = seq.levels.size() - window; i < seq.levels.size(); ++i) {
    n.push_back(seq.levels[i].n);
    mu.push_back(seq.levels[i].mu);
  }
  return extrapolate(n, mu);
}

}  // namespace mop
