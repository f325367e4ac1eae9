#ifndef LSBM_LANCZOS_HPP
#define LSBM_LANCZOS_HPP

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <cstdint>
#include <functional>
#include <vector>

#include "lsbm/error.hpp"

namespace lsbm {

/// Matrix-free view of a real symmetric operator.
struct SymmetricOperator {
  Eigen::Index n = 0;
  std::function<void(const Eigen::VectorXd&, Eigen::VectorXd&)> apply;
};

SymmetricOperator as_operator(const Eigen::SparseMatrix<double>& m);
SymmetricOperator as_operator(const Eigen::MatrixXd& m);

struct EigsOptions {
  int maxMatvecs = 5000;        // hard cap on operator applications
  double tol = 1e-10;           // Ritz residual-estimate tolerance
  double acceptResidual = 1e-8; // explicit residual bound, relative to max(1, |value|)
  int denseCutoff = 500;        // below this order, solve densely
  std::uint64_t seed = 0x6c616e;
};

/// The k eigenpairs of largest |eigenvalue|, sorted by descending |value| with
/// ties preferring the positive value. Vectors are unit norm. Krylov path:
/// Rayleigh-Ritz over a fully reorthogonalized basis with thick restarts;
/// convergence is confirmed with explicit residuals before returning.
/// Throws CONVERGENCE_FAILURE when the matvec budget runs out.
std::vector<std::pair<double, Eigen::VectorXd>> largest_abs_eigenpairs(
    const SymmetricOperator& op, int k, const EigsOptions& options = {});

/// Ordering shared by every eigenpair consumer: |value| descending, then
/// positive before negative, then original position.
bool eigenvalue_order(double a, double b);

}  // namespace lsbm

#endif  // LSBM_LANCZOS_HPP
