#include "lsbm/model.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

namespace lsbm {

namespace {

constexpr double kSumTol = 1e-12;

double raw_edge_probability(double t, int n) { return t * std::log(static_cast<double>(n)) / n; }

}  // namespace

double LsbmParams::edge_probability() const { return edge_probability(n); }

double LsbmParams::edge_probability(int n_override) const {
  return std::min(1.0, raw_edge_probability(t, n_override));
}

LsbmParams validate_params(int k, int L, const Eigen::VectorXd& pi,
                           const std::vector<Eigen::MatrixXd>& q, double t, int n) {
  if (k < 1) throw Error(ErrorCode::ConfigError, "k must be at least 1");
  if (L < 1) throw Error(ErrorCode::ConfigError, "L must be at least 1");
  if (n < 2) throw Error(ErrorCode::ConfigError, "n must be at least 2");
  if (!(t > 0.0)) throw Error(ErrorCode::ConfigError, "t must be positive");

  if (pi.size() != k) throw Error(ErrorCode::BadPi, "pi must have length k");
  for (int j = 0; j < k; ++j) {
    if (!(pi[j] > 0.0)) throw Error(ErrorCode::BadPi, "pi entries must be strictly positive");
  }
  if (std::abs(pi.sum() - 1.0) > kSumTol) {
    std::ostringstream msg;
    msg << "pi sums to " << pi.sum() << ", expected 1";
    throw Error(ErrorCode::BadPi, msg.str());
  }

  if (static_cast<int>(q.size()) != L) throw Error(ErrorCode::NonStochastic, "q must have L label slices");
  bool anyZero = false;
  for (int l = 0; l < L; ++l) {
    if (q[l].rows() != k || q[l].cols() != k) {
      throw Error(ErrorCode::NonStochastic, "each q slice must be k x k");
    }
  }
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < k; ++j) {
      double sum = 0.0;
      for (int l = 0; l < L; ++l) {
        const double value = q[l](i, j);
        if (value < 0.0 || value > 1.0) {
          throw Error(ErrorCode::NonStochastic, "q entries must lie in [0, 1]");
        }
        if (value == 0.0) anyZero = true;
        sum += value;
      }
      if (std::abs(sum - 1.0) > kSumTol) {
        std::ostringstream msg;
        msg << "q[" << i << "][" << j << "] sums to " << sum << ", expected 1";
        throw Error(ErrorCode::NonStochastic, msg.str());
      }
    }
  }
  for (int l = 0; l < L; ++l) {
    for (int i = 0; i < k; ++i) {
      for (int j = i + 1; j < k; ++j) {
        if (std::abs(q[l](i, j) - q[l](j, i)) > kSumTol) {
          std::ostringstream msg;
          msg << "q[" << i << "][" << j << "][" << l << "] != q[" << j << "][" << i << "][" << l << "]";
          throw Error(ErrorCode::AsymmetricQ, msg.str());
        }
      }
    }
  }

  if (raw_edge_probability(t, n) > 1.0 + kSumTol) {
    std::ostringstream msg;
    msg << "t log(n)/n = " << raw_edge_probability(t, n) << " exceeds 1";
    throw Error(ErrorCode::SignalTooLarge, msg.str());
  }

  LsbmParams params;
  params.k = k;
  params.L = L;
  params.pi = pi;
  params.q = q;
  params.t = t;
  params.n = n;
  params.fullyInformative = anyZero;
  return params;
}

LsbmParams params_from_json(const nlohmann::json& doc) {
  try {
    const int k = doc.at("k").get<int>();
    const int L = doc.at("L").get<int>();
    const auto& piArray = doc.at("pi");
    Eigen::VectorXd pi(static_cast<Eigen::Index>(piArray.size()));
    for (Eigen::Index j = 0; j < pi.size(); ++j) pi[j] = piArray.at(j).get<double>();

    const auto& qArray = doc.at("q");
    if (static_cast<int>(qArray.size()) != k) {
      throw Error(ErrorCode::NonStochastic, "q must have k rows");
    }
    std::vector<Eigen::MatrixXd> q(static_cast<std::size_t>(std::max(L, 1)),
                                   Eigen::MatrixXd::Zero(k, k));
    for (int i = 0; i < k; ++i) {
      if (static_cast<int>(qArray.at(i).size()) != k) {
        throw Error(ErrorCode::NonStochastic, "q rows must have k columns");
      }
      for (int j = 0; j < k; ++j) {
        const auto& cell = qArray.at(i).at(j);
        if (static_cast<int>(cell.size()) != L) {
          throw Error(ErrorCode::NonStochastic, "each q cell must list L label probabilities");
        }
        for (int l = 0; l < L; ++l) q[l](i, j) = cell.at(l).get<double>();
      }
    }

    const double t = doc.at("t").get<double>();
    const int n = doc.at("n").get<int>();
    return validate_params(k, L, pi, q, t, n);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ConfigError, std::string("malformed params document: ") + e.what());
  }
}

LsbmParams load_params(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open params file " + path);
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ConfigError, std::string("invalid JSON in ") + path + ": " + e.what());
  }
  return params_from_json(doc);
}

nlohmann::json params_to_json(const LsbmParams& params) {
  nlohmann::json doc;
  doc["k"] = params.k;
  doc["L"] = params.L;
  doc["pi"] = std::vector<double>(params.pi.data(), params.pi.data() + params.pi.size());
  nlohmann::json q = nlohmann::json::array();
  for (int i = 0; i < params.k; ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (int j = 0; j < params.k; ++j) {
      nlohmann::json cell = nlohmann::json::array();
      for (int l = 0; l < params.L; ++l) cell.push_back(params.q[l](i, j));
      row.push_back(cell);
    }
    q.push_back(row);
  }
  doc["q"] = q;
  doc["t"] = params.t;
  doc["n"] = params.n;
  return doc;
}

LsbmParams with_overrides(const LsbmParams& params, double t, int n) {
  return validate_params(params.k, params.L, params.pi, params.q, t, n);
}

Eigen::MatrixXd theta_matrix(const LsbmParams& params, int i) {
  if (i < 0 || i >= params.k) throw Error(ErrorCode::IndexOutOfRange, "community index out of range");
  Eigen::MatrixXd theta(params.k, params.L);
  for (int j = 0; j < params.k; ++j) {
    for (int l = 0; l < params.L; ++l) theta(j, l) = params.pi[j] * params.q[l](i, j);
  }
  return theta;
}

double ch_objective(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y, double lambda) {
  double sum = 0.0;
  for (Eigen::Index c = 0; c < x.cols(); ++c) {
    for (Eigen::Index r = 0; r < x.rows(); ++r) {
      const double xv = x(r, c);
      const double yv = y(r, c);
      if (xv > 0.0 && yv > 0.0) {
        sum += std::exp(lambda * std::log(xv) + (1.0 - lambda) * std::log(yv));
      } else if (xv == 0.0 && yv > 0.0) {
        if (lambda == 0.0) sum += yv;  // limit convention
      } else if (yv == 0.0 && xv > 0.0) {
        if (lambda == 1.0) sum += xv;
      }
    }
  }
  return sum;
}

DivergenceResult ch_divergence(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y) {
  if (x.rows() != y.rows() || x.cols() != y.cols()) {
    throw Error(ErrorCode::DimensionMismatch, "theta matrices must share dimensions");
  }

  int evaluations = 0;
  const auto f = [&](double lambda) {
    ++evaluations;
    return ch_objective(x, y, lambda);
  };

  // Golden-section style search on convex f, with the tie case shrinking both
  // ends so the trajectory is mirror symmetric under lambda <-> 1 - lambda.
  const double invPhi = (std::sqrt(5.0) - 1.0) / 2.0;
  double lo = 0.0, hi = 1.0;
  const double tol = 1e-10;
  while (hi - lo > tol) {
    const double span = hi - lo;
    const double c = hi - invPhi * span;
    const double d = lo + invPhi * span;
    const double fc = f(c);
    const double fd = f(d);
    if (fc < fd) {
      hi = d;
    } else if (fd < fc) {
      lo = c;
    } else {
      lo = c;
      hi = d;
    }
  }

  DivergenceResult result;
  result.lambdaStar = 0.5 * (lo + hi);
  const double fmin = f(result.lambdaStar);
  result.value = std::clamp(1.0 - fmin, 0.0, 1.0);
  result.evaluations = evaluations;
  return result;
}

double critical_t(const LsbmParams& params) {
  if (params.k < 2) {
    throw Error(ErrorCode::DegenerateParams, "threshold undefined for a single community");
  }
  double minDivergence = std::numeric_limits<double>::infinity();
  for (int i = 0; i < params.k; ++i) {
    const Eigen::MatrixXd thetaI = theta_matrix(params, i);
    for (int j = i + 1; j < params.k; ++j) {
      const Eigen::MatrixXd thetaJ = theta_matrix(params, j);
      minDivergence = std::min(minDivergence, ch_divergence(thetaI, thetaJ).value);
    }
  }
  if (minDivergence <= 1e-12) {
    throw Error(ErrorCode::DegenerateParams,
                "two communities have (near-)identical theta matrices; recovery impossible");
  }
  return 1.0 / minDivergence;
}

SpectralConditionReport spectral_condition_check(const LsbmParams& params, double tolAbs,
                                                 double tolGap) {
  SpectralConditionReport report;
  report.perLabel.reserve(params.q.size());
  report.allSatisfied = true;
  for (int l = 0; l < params.L; ++l) {
    const Eigen::MatrixXd m = params.q[l] * params.pi.asDiagonal();
    Eigen::EigenSolver<Eigen::MatrixXd> solver(m, /*computeEigenvectors=*/false);
    LabelConditionReport entry;
    entry.eigenvalues = solver.eigenvalues();

    bool ok = true;
    for (Eigen::Index a = 0; a < entry.eigenvalues.size(); ++a) {
      if (std::abs(entry.eigenvalues[a].imag()) > tolAbs) {
        entry.hasComplexEigenvalue = true;
        ok = false;
      }
      if (std::abs(entry.eigenvalues[a]) <= tolAbs) ok = false;
    }
    if (!entry.hasComplexEigenvalue) {
      for (Eigen::Index a = 0; a < entry.eigenvalues.size() && ok; ++a) {
        for (Eigen::Index b = a + 1; b < entry.eigenvalues.size(); ++b) {
          if (std::abs(entry.eigenvalues[a].real() - entry.eigenvalues[b].real()) <= tolGap) {
            ok = false;
            break;
          }
        }
      }
    }
    entry.distinctNonzero = ok;
    report.allSatisfied = report.allSatisfied && ok;
    report.perLabel.push_back(std::move(entry));
  }
  return report;
}

nlohmann::json condition_to_json(const SpectralConditionReport& report) {
  nlohmann::json doc;
  doc["all_satisfied"] = report.allSatisfied;
  nlohmann::json perLabel = nlohmann::json::array();
  for (std::size_t l = 0; l < report.perLabel.size(); ++l) {
    const auto& entry = report.perLabel[l];
    nlohmann::json item;
    item["label"] = l + 1;
    nlohmann::json values = nlohmann::json::array();
    for (Eigen::Index a = 0; a < entry.eigenvalues.size(); ++a) {
      values.push_back({{"re", entry.eigenvalues[a].real()}, {"im", entry.eigenvalues[a].imag()}});
    }
    item["eigenvalues"] = values;
    item["distinct_nonzero"] = entry.distinctNonzero;
    item["has_complex_eigenvalue"] = entry.hasComplexEigenvalue;
    perLabel.push_back(item);
  }
  doc["per_label"] = perLabel;
  return doc;
}

}  // namespace lsbm
