#include "helixguard/solver.hpp"

#include "helixguard/integrate.hpp"
#include "helixguard/tighten.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

namespace helixguard {

double SolverSolution::max_slack() const {
  return slacks.empty() ? 0.0 : *std::max_element(slacks.begin(), slacks.end());
}

SolverSolution initial_guess(const OcpProblem& problem) {
  const int n = problem.horizon();
  SolverSolution s;
  s.states.assign(n + 1, problem.initial_state);
  s.inputs.assign(n, InputVec::Zero());
  s.slacks.assign(n + 1, 0.0);
  return s;
}

SolverSolution shift(const SolverSolution& sol) {
  SolverSolution s = sol;
  if (s.states.size() > 1) {
    std::rotate(s.states.begin(), s.states.begin() + 1, s.states.end());
    s.states.back() = s.states[s.states.size() - 2];
  }
  if (s.inputs.size() > 1) {
    std::rotate(s.inputs.begin(), s.inputs.begin() + 1, s.inputs.end());
    s.inputs.back() = s.inputs[s.inputs.size() - 2];
  }
  if (s.slacks.size() > 1) {
    std::rotate(s.slacks.begin(), s.slacks.begin() + 1, s.slacks.end());
    s.slacks.back() = s.slacks[s.slacks.size() - 2];
  }
  return s;
}

LqSubproblem RtiSolver::linearize(const OcpProblem& problem,
                                  const SolverSolution& warm) const {
  const int N = problem.horizon();
  const NmpcConfig& cfg = problem.config;
  const GtmrParams& params = problem.params;
  if (static_cast<int>(warm.states.size()) != N + 1 ||
      static_cast<int>(warm.inputs.size()) != N) {
    throw std::invalid_argument("warm start does not match the horizon length");
  }

  LqSubproblem lq;
  lq.N = N;
  lq.nx = kStateDim;
  lq.nu = kInputDim;
  lq.A.resize(N);
  lq.B.resize(N);
  lq.d.resize(N);
  lq.C.resize(N + 1);
  lq.res.resize(N + 1);
  lq.W.resize(N + 1);
  lq.Ru.resize(N);
  lq.u_lin.resize(N);
  lq.du_lb.resize(N);
  lq.du_ub.resize(N);
  lq.x_lin.resize(N + 1);
  lq.soft.resize(N + 1);
  lq.dx0 = problem.initial_state - warm.states[0];
  lq.soft_weight = cfg.soft_penalty_weight;
  lq.reg = levenberg_;

  for (int j = 0; j < kRotors; ++j) {
    lq.bounded_states.push_back(idx::kRotor + j);
  }
  lq.x_lb = cfg.rotor_speed_lower;
  lq.x_ub = cfg.rotor_speed_upper;

  const Eigen::Matrix<double, 9, 1> stage_w = cfg.stage_weights();
  for (int i = 0; i <= N; ++i) {
    const StateVec& x = warm.states[i];
    const ReferencePoint& r = problem.references[i];
    lq.x_lin[i] = x;

    if (i < N) {
      const DiscreteLinearization lin =
          rk4_linearize(x, warm.inputs[i], cfg.sampling_time, params);
      lq.A[i] = lin.A;
      lq.B[i] = lin.B;
      lq.d[i] = lin.next - warm.states[i + 1];

      // Outputs [p; v; v_dot(x); omega; xi - xi_h]
      const StateVec& xdot = lin.xdot;
      const StateJac& fx = lin.fx;
      Eigen::MatrixXd C = Eigen::MatrixXd::Zero(18, kStateDim);
      C.block<3, 3>(0, idx::kPos).setIdentity();
      C.block<3, 3>(3, idx::kVel).setIdentity();
      C.block<3, kStateDim>(6, 0) = fx.block<3, kStateDim>(idx::kVel, 0);
      C.block<3, 3>(9, idx::kRates).setIdentity();
      C.block<6, 6>(12, idx::kRotor).setIdentity();
      Eigen::VectorXd res(18);
      res << x.segment<3>(idx::kPos) - r.position, x.segment<3>(idx::kVel) - r.velocity,
          xdot.segment<3>(idx::kVel) - r.acceleration, x.segment<3>(idx::kRates),
          x.segment<6>(idx::kRotor).array() - params.hover_rotor_speed();
      lq.C[i] = std::move(C);
      lq.res[i] = std::move(res);
      Eigen::VectorXd w(18);
      w << stage_w, cfg.Q_w, Vec6::Constant(cfg.Q_xi);
      lq.W[i] = std::move(w);

      lq.Ru[i] = cfg.Q_u;
      lq.u_lin[i] = warm.inputs[i];
      lq.du_lb[i] = cfg.rate_lower - warm.inputs[i];
      lq.du_ub[i] = cfg.rate_upper - warm.inputs[i];
    } else {
      Eigen::MatrixXd C = Eigen::MatrixXd::Zero(3, kStateDim);
      C.block<3, 3>(0, idx::kPos).setIdentity();
      lq.C[i] = std::move(C);
      lq.res[i] = x.segment<3>(idx::kPos) - r.position;
      lq.W[i] = cfg.Q_f;
    }

    // d_T(p) + grad d_T . dp + s >= b, grad d_T = -J_yx.
    SoftRow row;
    row.a = -clearance_jacobian_row(x, problem.geometry).transpose();
    row.c = tower_distance(x.segment<3>(idx::kPos), problem.geometry) - problem.stage_bounds[i];
    lq.soft[i] = std::move(row);
  }
  return lq;
}

SolverSolution RtiSolver::rti_step(const OcpProblem& problem, const SolverSolution& warm) {
  const auto start = std::chrono::steady_clock::now();
  const int N = problem.horizon();
  const LqSubproblem lq = linearize(problem, warm);
  const QpProblem qp = condense(lq);
  if (!qp.H.allFinite() || !qp.g.allFinite() || !qp.A.allFinite()) {
    throw SolverError("non-finite linearization");
  }

  QpOptions opts;
  opts.hint = &active_hint_;
  QpSolution qs = solve_qp(qp, opts);
  // Levenberg safeguard: increase damping on failure.
  double reg = levenberg_;
  QpProblem damped;
  for (int attempt = 0; attempt < 6 && qs.status != QpStatus::kOptimal; ++attempt) {
    if (attempt == 0) {
      damped = qp;
    }
    const double next = reg * 10.0;
    damped.H.diagonal().array() += next - reg;
    reg = next;
    qs = solve_qp(damped, opts);
  }
  if (qs.status == QpStatus::kInfeasible || qs.status == QpStatus::kNotConvex) {
    throw SolverError(std::string("QP failed: ") + to_string(qs.status));
  }
  active_hint_ = qs.active;

  const int n_u = N * kInputDim;
  const Eigen::VectorXd du = qs.z.head(n_u);
  const std::vector<Eigen::VectorXd> dx = expand_states(lq, du);

  SolverSolution out;
  out.states.resize(N + 1);
  out.inputs.resize(N);
  out.slacks.resize(N + 1);
  double step = 0.0;
  for (int i = 0; i <= N; ++i) {
    out.states[i] = warm.states[i] + StateVec(dx[i]);
    step = std::max(step, dx[i].lpNorm<Eigen::Infinity>());
    out.slacks[i] = std::max(0.0, qs.z[n_u + i]);
  }
  for (int i = 0; i < N; ++i) {
    out.inputs[i] = warm.inputs[i] + InputVec(du.segment<kInputDim>(i * kInputDim));
  }
  step = std::max(step, du.lpNorm<Eigen::Infinity>());
  double defect = 0.0;
  for (const auto& d : lq.d) {
    defect = std::max(defect, d.lpNorm<Eigen::Infinity>());
  }
  out.kkt_residual = std::max({step, defect, lq.dx0.lpNorm<Eigen::Infinity>()});
  out.qp_iterations = qs.iterations;
  out.qp_status = qs.status;
  out.qp_objective = qs.objective;

  // Model value of the zero step with minimal slacks, for merit checks.
  Eigen::VectorXd z0 = Eigen::VectorXd::Zero(qp.num_vars());
  bool feasible = (qp.lb.head(n_u).array() <= 0.0).all() && (qp.ub.head(n_u).array() >= 0.0).all();
  const int n_xb = static_cast<int>(lq.bounded_states.size());
  for (int r = 0; r < N * n_xb && feasible; ++r) {
    feasible = qp.lbA[r] <= 1e-12 && qp.ubA[r] >= -1e-12;
  }
  for (int i = 0; i <= N; ++i) {
    z0[n_u + i] = std::max(0.0, qp.lbA[N * n_xb + i]);
  }
  out.zero_step_feasible = feasible;
  out.qp_zero_step_objective = 0.5 * z0.dot(qp.H * z0) + qp.g.dot(z0);

  for (const auto& x : out.states) {
    if (!x.allFinite()) {
      throw SolverError("non-finite SQP iterate");
    }
  }
  out.solve_time =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return out;
}

}  // namespace helixguard
