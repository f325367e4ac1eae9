#ifndef LSBM_MODEL_HPP
#define LSBM_MODEL_HPP

#include <Eigen/Dense>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "lsbm/error.hpp"

namespace lsbm {

/// Validated model parameters. Communities are 0-based in code; pairwise
/// labels take values in 1..L, with 0 reserved for "no observation".
///
/// q[l-1] is the k x k matrix of conditional label probabilities
/// q(i,j) = P(label = l | communities i, j); each (i,j) slice over l is a
/// probability distribution and is symmetric in (i,j).
struct LsbmParams {
  int k = 0;
  int L = 0;
  Eigen::VectorXd pi;
  std::vector<Eigen::MatrixXd> q;
  double t = 0.0;
  int n = 0;

  /// True when some q entry is exactly zero (fully informative labels).
  /// Downstream log(q) weights then use a -inf sentinel where defined.
  bool fullyInformative = false;

  /// Probability that a pair carries any nonzero label, clamped to 1.
  double edge_probability() const;
  double edge_probability(int n_override) const;
};

/// Checks every invariant of the parameter bundle and returns the validated
/// params. Throws Error with code NON_STOCHASTIC, ASYMMETRIC_Q, BAD_PI,
/// SIGNAL_TOO_LARGE or CONFIG_ERROR.
LsbmParams validate_params(int k, int L, const Eigen::VectorXd& pi,
                           const std::vector<Eigen::MatrixXd>& q, double t, int n);

/// Parses {k, L, pi, q, t, n} with q indexed [i][j][l], all 0-based, and
/// validates.
LsbmParams params_from_json(const nlohmann::json& doc);
LsbmParams load_params(const std::string& path);
nlohmann::json params_to_json(const LsbmParams& params);

/// Re-validates a copy of params with a different signal strength and/or size.
LsbmParams with_overrides(const LsbmParams& params, double t, int n);

/// k x L matrix with entry (j, l) = pi_j * q(i,j,l) for a fixed community i.
Eigen::MatrixXd theta_matrix(const LsbmParams& params, int i);

struct DivergenceResult {
  double value = 0.0;       // D_+ in [0, 1] for theta inputs
  double lambdaStar = 0.0;  // minimizer of f over [0, 1]
  int evaluations = 0;      // objective evaluations spent
};

/// Chernoff-Hellinger divergence D_+(x, y) = 1 - inf_{lambda in [0,1]}
/// sum_ij x_ij^lambda y_ij^(1-lambda) for normalized nonnegative x, y.
/// Zero entries follow the limit convention x^lambda * 0^(1-lambda) = 0 for
/// lambda < 1 and = x at lambda = 1.
DivergenceResult ch_divergence(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y);

/// Objective f(lambda) = sum x^lambda y^(1-lambda); exposed for grid oracles.
double ch_objective(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y, double lambda);

/// Exact-recovery threshold (min over community pairs of D_+(theta_i,
/// theta_j))^-1. Throws DEGENERATE_PARAMS when some pair has divergence at or
/// below 1e-12 (recovery impossible at any signal strength).
double critical_t(const LsbmParams& params);

struct LabelConditionReport {
  Eigen::VectorXcd eigenvalues;  // spectrum of Q^(l) * diag(pi)
  bool distinctNonzero = false;
  bool hasComplexEigenvalue = false;
};

struct SpectralConditionReport {
  std::vector<LabelConditionReport> perLabel;
  bool allSatisfied = false;
};

/// For each label l, eigenvalues of Q^(l) * diag(pi) and whether they are all
/// nonzero with pairwise-distinct real parts. Non-real eigenvalues are
/// reported and fail the check.
SpectralConditionReport spectral_condition_check(const LsbmParams& params,
                                                 double tolAbs = 1e-9,
                                                 double tolGap = 1e-9);

nlohmann::json condition_to_json(const SpectralConditionReport& report);

}  // namespace lsbm

#endif  // LSBM_MODEL_HPP
