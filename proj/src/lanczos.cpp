#include "lsbm/lanczos.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <numeric>

#include "lsbm/rng.hpp"

namespace lsbm {

namespace {

struct RankedValue {
  double value;
  int position;
};

// Indices of the k winners under the shared ordering.
std::vector<int> top_k_positions(const Eigen::VectorXd& values, int k) {
  std::vector<RankedValue> ranked(static_cast<std::size_t>(values.size()));
  for (Eigen::Index i = 0; i < values.size(); ++i) {
    ranked[static_cast<std::size_t>(i)] = {values[i], static_cast<int>(i)};
  }
  std::stable_sort(ranked.begin(), ranked.end(), [](const RankedValue& a, const RankedValue& b) {
    if (std::abs(a.value) != std::abs(b.value)) return std::abs(a.value) > std::abs(b.value);
    if ((a.value > 0) != (b.value > 0)) return a.value > 0;
    return a.position < b.position;
  });
  std::vector<int> out;
  out.reserve(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) out.push_back(ranked[static_cast<std::size_t>(i)].position);
  return out;
}

std::vector<std::pair<double, Eigen::VectorXd>> dense_path(const SymmetricOperator& op, int k) {
  const Eigen::Index n = op.n;
  Eigen::MatrixXd dense(n, n);
  Eigen::VectorXd unit = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd column(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    unit[j] = 1.0;
    op.apply(unit, column);
    dense.col(j) = column;
    unit[j] = 0.0;
  }
  dense = 0.5 * (dense + dense.transpose()).eval();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(dense);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorCode::ConvergenceFailure, "dense eigensolver failed");
  }
  const auto winners = top_k_positions(solver.eigenvalues(), k);
  std::vector<std::pair<double, Eigen::VectorXd>> out;
  out.reserve(winners.size());
  for (const int p : winners) {
    out.emplace_back(solver.eigenvalues()[p], solver.eigenvectors().col(p));
  }
  return out;
}

}  // namespace

SymmetricOperator as_operator(const Eigen::SparseMatrix<double>& m) {
  return {m.rows(), [&m](const Eigen::VectorXd& x, Eigen::VectorXd& y) { y.noalias() = m * x; }};
}

SymmetricOperator as_operator(const Eigen::MatrixXd& m) {
  return {m.rows(), [&m](const Eigen::VectorXd& x, Eigen::VectorXd& y) { y.noalias() = m * x; }};
}

bool eigenvalue_order(double a, double b) {
  if (std::abs(a) != std::abs(b)) return std::abs(a) > std::abs(b);
  return a > b;
}

std::vector<std::pair<double, Eigen::VectorXd>> largest_abs_eigenpairs(
    const SymmetricOperator& op, int k, const EigsOptions& options) {
  const Eigen::Index n = op.n;
  if (k < 1 || k > n) throw Error(ErrorCode::IndexOutOfRange, "k must lie in [1, n]");
  if (n < options.denseCutoff) return dense_path(op, k);

  const int maxBasis = static_cast<int>(std::min<Eigen::Index>(n, std::max(4 * k + 20, 80)));
  const int keepOnRestart = std::min(maxBasis - 2, 2 * k + 10);

  Eigen::MatrixXd basis(n, maxBasis);
  Eigen::MatrixXd projected = Eigen::MatrixXd::Zero(maxBasis, maxBasis);

  SplitRng rng(options.seed);
  auto randomUnit = [&rng, n]() {
    Eigen::VectorXd v(n);
    for (Eigen::Index i = 0; i < n; ++i) v[i] = rng.uniform01() - 0.5;
    v.normalize();
    return v;
  };

  // Appends w (orthogonalized against the current basis) as a new column.
  // Returns false when w lies in the span already.
  int size = 0;       // vectors in the basis
  int processed = 0;  // leading columns of `projected` that are filled
  auto appendVector = [&](Eigen::VectorXd w) {
    for (int pass = 0; pass < 2; ++pass) {
      if (size > 0) {
        const Eigen::VectorXd coeffs = basis.leftCols(size).transpose() * w;
        w.noalias() -= basis.leftCols(size) * coeffs;
      }
    }
    const double norm = w.norm();
    if (norm < 1e-12) return false;
    basis.col(size) = w / norm;
    ++size;
    return true;
  };

  if (!appendVector(randomUnit())) {
    throw Error(ErrorCode::ConvergenceFailure, "could not seed the Krylov basis");
  }

  int matvecs = 0;
  Eigen::VectorXd applied(n);
  std::vector<std::pair<double, Eigen::VectorXd>> result;

  while (true) {
    // Process the newest basis vector: column `processed` of the projection.
    if (matvecs >= options.maxMatvecs) {
      throw Error(ErrorCode::ConvergenceFailure, "eigensolver exceeded its matvec budget");
    }
    op.apply(basis.col(processed), applied);
    ++matvecs;
    const Eigen::VectorXd coeffs = basis.leftCols(size).transpose() * applied;
    projected.block(0, processed, size, 1) = coeffs;
    projected.block(processed, 0, 1, size) = coeffs.transpose();

    Eigen::VectorXd residualDirection = applied - basis.leftCols(size) * coeffs;
    // Second orthogonalization pass keeps the basis orthonormal to machine
    // precision even for clustered spectra.
    residualDirection.noalias() -= basis.leftCols(size) * (basis.leftCols(size).transpose() * residualDirection);
    const double beta = residualDirection.norm();
    ++processed;

    bool expanded = false;
    if (size < maxBasis && beta >= 1e-12) {
      basis.col(size) = residualDirection / beta;
      ++size;
      expanded = true;
    }

    // Rayleigh-Ritz over the processed block.
    if (processed >= std::min<int>(k, static_cast<int>(n))) {
      Eigen::MatrixXd h = projected.topLeftCorner(processed, processed);
      h = 0.5 * (h + h.transpose()).eval();
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> small(h);
      const auto winners = top_k_positions(small.eigenvalues(), std::min(k, processed));

      bool plausible = processed >= k;
      if (plausible) {
        for (const int w : winners) {
          const double theta = small.eigenvalues()[w];
          const double estimate = beta * std::abs(small.eigenvectors()(processed - 1, w));
          if (estimate > options.tol * std::max(1.0, std::abs(theta))) {
            plausible = false;
            break;
          }
        }
      }
      const bool basisExhausted = (processed == n) || (!expanded && beta < 1e-12 && size == processed);

      if (plausible || basisExhausted) {
        // Confirm with explicit residuals before accepting.
        result.clear();
        bool allVerified = true;
        for (const int w : winners) {
          const double theta = small.eigenvalues()[w];
          Eigen::VectorXd ritz = basis.leftCols(processed) * small.eigenvectors().col(w);
          ritz.normalize();
          if (matvecs >= options.maxMatvecs) {
            throw Error(ErrorCode::ConvergenceFailure, "eigensolver exceeded its matvec budget");
          }
          op.apply(ritz, applied);
          ++matvecs;
          const double residual = (applied - theta * ritz).norm();
          if (residual > options.acceptResidual * std::max(1.0, std::abs(theta))) {
            allVerified = false;
            break;
          }
          result.emplace_back(theta, std::move(ritz));
        }
        if (allVerified && static_cast<int>(result.size()) == k) return result;
        if (basisExhausted) {
          if (allVerified && static_cast<int>(result.size()) == winners.size()) return result;
          throw Error(ErrorCode::ConvergenceFailure, "Krylov space exhausted before convergence");
        }
      }

      // Thick restart: compress onto the leading Ritz vectors and keep the
      // residual direction as the next vector to process.
      if (!expanded || size == maxBasis) {
        const int keep = std::min(keepOnRestart, processed);
        const auto keepSet = top_k_positions(small.eigenvalues(), keep);
        Eigen::MatrixXd ritzCoeffs(processed, keep);
        for (int c = 0; c < keep; ++c) ritzCoeffs.col(c) = small.eigenvectors().col(keepSet[static_cast<std::size_t>(c)]);
        const Eigen::MatrixXd compressed = basis.leftCols(processed) * ritzCoeffs;
        basis.leftCols(keep) = compressed;
        projected.setZero();
        projected.topLeftCorner(keep, keep) = ritzCoeffs.transpose() * h * ritzCoeffs;
        size = keep;
        processed = keep;
        Eigen::VectorXd next = expanded ? Eigen::VectorXd(basis.col(maxBasis - 1)) : randomUnit();
        if (expanded) next = residualDirection / beta;
        if (!appendVector(next)) {
          while (size == processed) {
            if (!appendVector(randomUnit())) continue;
          }
        }
      }
    } else if (!expanded && size == processed) {
      // Breakdown before enough vectors exist: inject a fresh direction.
      while (size == processed) {
        appendVector(randomUnit());
      }
    }
  }
}

}  // namespace lsbm
