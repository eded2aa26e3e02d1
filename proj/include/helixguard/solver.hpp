/**
 * @file solver.hpp
 * @brief Gauss-Newton SQP in real-time-iteration mode on the multiple-shooting
 * horizon problem.
 */
#pragma once

#include "helixguard/condense.hpp"
#include "helixguard/ocp.hpp"

#include <stdexcept>
#include <string>
#include <vector>

namespace helixguard {

struct SolverSolution {
  std::vector<StateVec> states;  // N+1
  std::vector<InputVec> inputs;  // N
  std::vector<double> slacks;    // N+1
  double kkt_residual = 0.0;
  int qp_iterations = 0;
  double solve_time = 0.0;  // s
  QpStatus qp_status = QpStatus::kOptimal;
  double qp_objective = 0.0;
  /// QP model value at du = 0 with the smallest admissible slacks; only
  /// meaningful when `zero_step_feasible` is set.
  double qp_zero_step_objective = 0.0;
  bool zero_step_feasible = false;

  [[nodiscard]] double max_slack() const;
};

/// Constant trajectory at x0 with zero inputs.
SolverSolution initial_guess(const OcpProblem& problem);

/// Drops the first stage and duplicates the last one.
SolverSolution shift(const SolverSolution& sol);

/// Thrown when the linearization or the QP produce non-finite data.
class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class RtiSolver {
 public:
  explicit RtiSolver(double levenberg = 1e-6) : levenberg_(levenberg) {}

  /// One Gauss-Newton SQP iteration with full step.
  SolverSolution rti_step(const OcpProblem& problem, const SolverSolution& warm_start);

  /// Linear-quadratic subproblem at the warm start (exposed for tests).
  [[nodiscard]] LqSubproblem linearize(const OcpProblem& problem,
                                       const SolverSolution& warm_start) const;

  [[nodiscard]] double levenberg() const { return levenberg_; }

 private:
  double levenberg_;
  ActiveSet active_hint_;
};

}  // namespace helixguard
