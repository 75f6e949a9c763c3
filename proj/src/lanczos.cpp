#include "mop/lanczos.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace mop {

namespace {

// Two passes of classical Gram-Schmidt against the first `count` columns.
// Returns the accumulated projection coefficients.
ComplexVector orthogonalize(const ComplexMatrix& basis, Eigen::Index count, ComplexVector& w) {
  ComplexVector h = basis.leftCols(count).adjoint() * w;
  w.noalias() -= basis.leftCols(count) * h;
  const ComplexVector h2 = basis.leftCols(count).adjoint() * w;
  w.noalias() -= basis.leftCols(count) * h2;
  return h + h2;
}

ComplexVector random_vector(Eigen::Index n, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  ComplexVector v(n);
  for (Eigen::Index i = 0; i < n; ++i) v[i] = Complex(gauss(rng), gauss(rng));
  return v;
}

}  // namespace

Eigenpair largest_eigenpair(const SparseHermitian& q, const LanczosOptions& opts,
                            const std::optional<ComplexVector>& start) {
  const auto n = static_cast<Eigen::Index>(q.dim());
  if (n == 0) throw std::invalid_argument("largest_eigenpair: empty matrix");
  if (!(opts.tol > 0.0)) throw std::invalid_argument("largest_eigenpair: tol must be > 0");
  const std::size_t max_iter = opts.max_iter ? opts.max_iter : 10 * static_cast<std::size_t>(n);
  const Eigen::Index m = std::min<Eigen::Index>(std::max<std::size_t>(opts.basis_size, 2), n);
  const Eigen::Index keep = std::clamp<Eigen::Index>(static_cast<Eigen::Index>(opts.keep), 1,
                                                     std::max<Eigen::Index>(m - 1, 1));

  std::mt19937_64 rng(opts.seed);
  ComplexVector v0;
  if (start && start->size() == n && start->norm() > 0.0) {
    v0 = *start;
  } else {
    if (start && start->size() != n)
      throw std::invalid_argument("largest_eigenpair: start vector has wrong size");
    std::normal_distribution<double> gauss(0.0, 1.0);
    v0.resize(n);
    for (Eigen::Index i = 0; i < n; ++i)
      v0[i] = Complex(1.0 + 0.05 * gauss(rng), 0.05 * gauss(rng));
  }
  v0.normalize();

  ComplexMatrix basis(n, m);
  ComplexMatrix proj = ComplexMatrix::Zero(m, m);  // upper triangle holds V^dagger Q V
  basis.col(0) = v0;
  Eigen::Index vectors = 1;  // columns of `basis` in use
  Eigen::Index columns = 0;  // columns of `proj` computed
  ComplexVector w(n), residual_vec(n);
  double beta = 0.0;
  double scale = 0.0;

  Eigenpair best;
  best.residual = std::numeric_limits<double>::infinity();
  std::size_t iters = 0;

  while (true) {
    bool exhausted = false;  // invariant subspace reached
    while (columns < m && iters < max_iter) {
      const Eigen::Index j = columns;
      q.multiply(basis.col(j), w);
      ++iters;
      const ComplexVector h = orthogonalize(basis, vectors, w);
      proj.col(j).head(vectors) = h;
      scale = std::max(scale, h.cwiseAbs().maxCoeff());
      ++columns;
      beta = w.norm();
      if (columns == m) break;
      if (beta <= 1e-13 * std::max(scale, 1.0)) {
        exhausted = true;
        beta = 0.0;
        break;
      }
      basis.col(vectors++) = w / beta;
    }

    Eigen::SelfAdjointEigenSolver<ComplexMatrix> ritz(
        proj.topLeftCorner(columns, columns).selfadjointView<Eigen::Upper>());
    const double theta = ritz.eigenvalues()[columns - 1];
    const ComplexVector y = ritz.eigenvectors().col(columns - 1);
    const double estimate = beta * std::abs(y[columns - 1]);

    const bool out_of_budget = iters >= max_iter;
    if (estimate <= opts.tol || exhausted || out_of_budget || columns == n) {
      ComplexVector x = basis.leftCols(columns) * y;
      x.normalize();
      q.multiply(x, residual_vec);
      ++iters;
      const double res = (residual_vec - theta * x).norm();
      if (res < best.residual) {
        best.value = theta;
        best.vector = x;
        best.residual = res;
      }
      if (res <= opts.tol) {
        best.iterations = iters;
        best.converged = true;
        return best;
      }
      if (iters >= max_iter || columns == n) break;
      if (exhausted) {
        // Invariant subspace without a converged pair: continue from a fresh
        // direction orthogonal to everything seen so far.
        ComplexVector r = random_vector(n, rng);
        orthogonalize(basis, vectors, r);
        if (columns < m && vectors < n) {
          basis.col(vectors++) = r.normalized();
          continue;
        }
        w = r;
        beta = r.norm();
      }
    }

    // Thick restart: keep the leading Ritz vectors, continue from the
    // residual direction.
    const Eigen::Index k = std::min(keep, columns - 1);
    const ComplexMatrix yk = ritz.eigenvectors().rightCols(k);
    const ComplexMatrix kept = basis.leftCols(columns) * yk;
    basis.leftCols(k) = kept;
    proj.setZero();
    for (Eigen::Index i = 0; i < k; ++i) proj(i, i) = ritz.eigenvalues()[columns - k + i];
    orthogonalize(basis, k, w);
    const double wn = w.norm();
    if (wn <= 1e-13 * std::max(scale, 1.0)) {
      w = random_vector(n, rng);
      orthogonalize(basis, k, w);
    }
    basis.col(k) = w.normalized();
    vectors = k + 1;
    columns = k;
  }

  best.iterations = iters;
  best.converged = false;
  return best;
}

}  // namespace mop
