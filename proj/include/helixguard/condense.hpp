/**
 * @file condense.hpp
 * @brief Linear-quadratic multiple-shooting subproblem and its condensed and
 * sparse QP forms.
 *
 * In deviation variables around a linearization point:
 *
 *   min  sum_i ||res_i + C_i dx_i||^2_{W_i} + sum_i ||ubar_i + du_i||^2_{Ru_i}
 *        + w_s sum_i s_i + reg/2 ||(du, s)||^2
 *   s.t. dx_0 = dx0,  dx_{i+1} = A_i dx_i + B_i du_i + d_i
 *        du_lb_i <= du_i <= du_ub_i
 *        x_lb <= xbar_i[j] + dx_i[j] <= x_ub      (bounded state indices j, i >= 1)
 *        c_i + a_i' dx_i + s_i >= 0,  s_i >= 0     (soft rows, i = 0..N)
 *
 * All weights are diagonal.
 */
#pragma once

#include "helixguard/qp.hpp"

#include <vector>

namespace helixguard {

struct SoftRow {
  Eigen::VectorXd a;  // nx
  double c = 0.0;
};

struct LqSubproblem {
  int N = 0;
  int nx = 0;
  int nu = 0;
  std::vector<Eigen::MatrixXd> A;  // N, nx x nx
  std::vector<Eigen::MatrixXd> B;  // N, nx x nu
  std::vector<Eigen::VectorXd> d;  // N
  Eigen::VectorXd dx0;

  std::vector<Eigen::MatrixXd> C;    // N+1, ny_i x nx
  std::vector<Eigen::VectorXd> res;  // N+1
  std::vector<Eigen::VectorXd> W;    // N+1

  std::vector<Eigen::VectorXd> Ru;     // N
  std::vector<Eigen::VectorXd> u_lin;  // N
  std::vector<Eigen::VectorXd> du_lb;  // N
  std::vector<Eigen::VectorXd> du_ub;  // N

  std::vector<int> bounded_states;
  Eigen::VectorXd x_lb;  // per bounded index
  Eigen::VectorXd x_ub;
  std::vector<Eigen::VectorXd> x_lin;  // N+1, needed when bounded_states is non-empty

  std::vector<SoftRow> soft;  // empty or N+1
  double soft_weight = 0.0;
  double reg = 0.0;

  [[nodiscard]] int num_soft() const { return static_cast<int>(soft.size()); }
  /// Throws std::invalid_argument on inconsistent dimensions.
  void validate() const;
};

/// QP in z = [du_0..du_{N-1}, s_0..s_N].
QpProblem condense(const LqSubproblem& lq);

/// QP in z = [dx_0..dx_N, du_0..du_{N-1}, s_0..s_N] with the dynamics as
/// equality rows. States receive `state_reg` as Hessian damping.
QpProblem sparse_qp(const LqSubproblem& lq, double state_reg = 1e-11);

/// Forward simulation of the linear dynamics for a given du.
std::vector<Eigen::VectorXd> expand_states(const LqSubproblem& lq, const Eigen::VectorXd& du);

}  // namespace helixguard
