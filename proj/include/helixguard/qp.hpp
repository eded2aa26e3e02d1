/**
 * @file qp.hpp
 * @brief Dense strictly convex QP solver (dual active-set, Goldfarb-Idnani).
 *
 *   min  0.5 z'Hz + g'z
 *   s.t. A_eq z = b_eq
 *        lbA <= A z <= ubA
 *        lb  <= z   <= ub
 *
 * Infinite bounds are allowed and ignored. The method starts from the
 * unconstrained minimizer, so no feasible starting point is required. A
 * previous active set may be passed as a hint; hinted constraints are tried
 * first when several constraints are violated.
 */
#pragma once

#include <Eigen/Dense>

#include <vector>

namespace helixguard {

struct QpProblem {
  Eigen::MatrixXd H;
  Eigen::VectorXd g;
  Eigen::MatrixXd A_eq;
  Eigen::VectorXd b_eq;
  Eigen::MatrixXd A;
  Eigen::VectorXd lbA;
  Eigen::VectorXd ubA;
  Eigen::VectorXd lb;
  Eigen::VectorXd ub;

  /// Empty problem with n variables and no constraints.
  static QpProblem unconstrained(const Eigen::MatrixXd& H, const Eigen::VectorXd& g);
  [[nodiscard]] int num_vars() const { return static_cast<int>(g.size()); }
};

enum class QpStatus { kOptimal, kInfeasible, kMaxIterations, kNotConvex };

const char* to_string(QpStatus s);

/// Active-set identifiers: one-sided constraints are numbered
/// [bounds lower | bounds upper | general lower | general upper].
using ActiveSet = std::vector<int>;

struct QpSolution {
  QpStatus status = QpStatus::kOptimal;
  Eigen::VectorXd z;
  double objective = 0.0;
  /// Multipliers, positive when the lower side is active and negative when
  /// the upper side is active (bounds and general rows).
  Eigen::VectorXd y_bounds;
  Eigen::VectorXd y_general;
  /// Multipliers of the equality rows, sign convention H z + g = A_eq' y_eq + ...
  Eigen::VectorXd y_eq;
  ActiveSet active;
  int iterations = 0;
};

struct QpOptions {
  int max_iterations = 0;  // 0: 10 * (n + number of one-sided constraints)
  double feasibility_tol = 1e-10;
  const ActiveSet* hint = nullptr;
};

QpSolution solve_qp(const QpProblem& qp, const QpOptions& opts = {});

/// Largest violation of stationarity, primal feasibility, dual sign and
/// complementarity for a candidate solution.
struct KktReport {
  double stationarity = 0.0;
  double primal = 0.0;
  double dual = 0.0;
  double complementarity = 0.0;
  [[nodiscard]] double max() const;
};

KktReport kkt_residuals(const QpProblem& qp, const QpSolution& sol);

}  // namespace helixguard
