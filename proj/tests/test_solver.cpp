#include "helixguard/sim.hpp"
#include "helixguard/solver.hpp"

#include <doctest.h>

using namespace helixguard;

namespace {

OcpProblem hover_problem() {
  const Scenario sc = Scenario::defaults();
  State s;
  s.position = Vec3(1.35, 0.0, 2.0);
  s.rotor_speeds.setConstant(sc.params.hover_rotor_speed());
  OcpProblem p = build_ocp(Variant::kNominal, s.flatten(), 0.0, std::nullopt, sc.nmpc, sc.tower,
                           sc.helix, sc.params);
  ReferencePoint r;
  r.position = s.position;
  p.references.assign(p.references.size(), r);
  return p;
}

OcpProblem tracking_problem() {
  const Scenario sc = Scenario::defaults();
  return build_ocp(Variant::kNominal, initial_state(sc), 0.0, std::nullopt, sc.nmpc, sc.tower,
                   sc.helix, sc.params);
}

}  // namespace

TEST_CASE("hover is a fixed point of the RTI step") {
  const OcpProblem p = hover_problem();
  const SolverSolution warm = initial_guess(p);
  RtiSolver solver;
  const SolverSolution next = solver.rti_step(p, warm);
  REQUIRE(next.qp_status == QpStatus::kOptimal);
  for (std::size_t i = 0; i < warm.states.size(); ++i) {
    CHECK((next.states[i] - warm.states[i]).lpNorm<Eigen::Infinity>() < 1e-9);
  }
  for (std::size_t i = 0; i < warm.inputs.size(); ++i) {
    CHECK(next.inputs[i].lpNorm<Eigen::Infinity>() < 1e-9);
  }
  CHECK(next.max_slack() < 1e-9);
}

TEST_CASE("repeated steps on a frozen problem converge") {
  const OcpProblem p = tracking_problem();
  RtiSolver solver;
  SolverSolution sol = initial_guess(p);
  std::vector<double> residuals;
  for (int k = 0; k < 20; ++k) {
    sol = solver.rti_step(p, sol);
    REQUIRE(sol.qp_status == QpStatus::kOptimal);
    residuals.push_back(sol.kkt_residual);
    if (sol.kkt_residual < 1e-6) {
      break;
    }
  }
  MESSAGE("iterations " << residuals.size() << ", final residual " << residuals.back());
  CHECK(residuals.back() < 1e-6);
  for (std::size_t k = 1; k < residuals.size(); ++k) {
    CHECK(residuals[k] <= residuals[k - 1]);
  }
}

TEST_CASE("the accepted step does not increase the model merit") {
  const OcpProblem p = tracking_problem();
  RtiSolver solver;
  SolverSolution sol = initial_guess(p);
  for (int k = 0; k < 6; ++k) {
    sol = solver.rti_step(p, sol);
    REQUIRE(sol.qp_status == QpStatus::kOptimal);
    if (sol.zero_step_feasible) {
      CHECK(sol.qp_objective <= sol.qp_zero_step_objective + 1e-9);
    }
  }
}

TEST_CASE("the first state is pinned to the measured state") {
  const OcpProblem p = tracking_problem();
  RtiSolver solver;
  const SolverSolution sol = solver.rti_step(p, initial_guess(p));
  CHECK((sol.states.front() - p.initial_state).lpNorm<Eigen::Infinity>() < 1e-12);
  CHECK(sol.states.size() == 21);
  CHECK(sol.inputs.size() == 20);
  CHECK(sol.slacks.size() == 21);
  for (const InputVec& u : sol.inputs) {
    CHECK(u.cwiseAbs().maxCoeff() <= 80.0 + 1e-9);
  }
}

TEST_CASE("shift drops the first stage and repeats the last") {
  SolverSolution s;
  for (int i = 0; i < 4; ++i) {
    s.states.push_back(StateVec::Constant(i));
    s.slacks.push_back(i);
  }
  for (int i = 0; i < 3; ++i) {
    s.inputs.push_back(InputVec::Constant(i));
  }
  const SolverSolution t = shift(s);
  CHECK(t.states[0][0] == 1.0);
  CHECK(t.states[3][0] == 3.0);
  CHECK(t.states[2][0] == 3.0);
  CHECK(t.inputs[0][0] == 1.0);
  CHECK(t.inputs[2][0] == 2.0);
  CHECK(t.slacks[3] == 3.0);
}

TEST_CASE("linearization shapes") {
  const OcpProblem p = tracking_problem();
  const RtiSolver solver;
  const LqSubproblem lq = solver.linearize(p, initial_guess(p));
  CHECK_NOTHROW(lq.validate());
  CHECK(lq.N == 20);
  CHECK(lq.nx == kStateDim);
  CHECK(lq.nu == kInputDim);
  CHECK(lq.num_soft() == 21);
  CHECK(lq.dx0.norm() == 0.0);
}
