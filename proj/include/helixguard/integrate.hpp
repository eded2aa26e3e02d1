/**
 * @file integrate.hpp
 * @brief Fixed-step RK4 discretization of the GTMR model, its discrete
 * Jacobians, and forward propagation of the parametric state sensitivity.
 */
#pragma once

#include "helixguard/model.hpp"

namespace helixguard {

/// Pi = dx/dzeta, rows in state order, columns in uncertainty order.
using SensitivityMatrix = ZetaJac;

/// One classical RK4 step of x_dot = f(x) for any vector-space type.
template <typename Vec, typename Rhs>
Vec rk4(Rhs&& f, const Vec& x, double dt) {
  const Vec k1 = f(x);
  const Vec k2 = f(Vec(x + 0.5 * dt * k1));
  const Vec k3 = f(Vec(x + 0.5 * dt * k2));
  const Vec k4 = f(Vec(x + dt * k3));
  return x + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

/// RK4 step with u, zeta and gust held over the step. With zero gust this is
/// the discrete prediction map F(x, u, zeta).
StateVec rk4_step(const StateVec& x, const InputVec& u, const ZetaVec& zeta, const Vec3& gust,
                  double dt, const GtmrParams& params);

/// Discrete map at the nominal uncertainty together with its exact Jacobians.
struct DiscreteLinearization {
  StateVec next;
  StateJac A;  // dF/dx
  InputJac B;  // dF/du
  StateVec xdot;  // f at the start point
  StateJac fx;    // df/dx at the start point
};

DiscreteLinearization rk4_linearize(const StateVec& x, const InputVec& u, double dt,
                                    const GtmrParams& params);

/**
 * @brief One RK4 step of the coupled system (x, Pi) with
 * Pi_dot = df/dx Pi + df/dzeta, evaluated at zeta = 0 and zero gust.
 */
SensitivityMatrix rk4_sensitivity_step(const StateVec& x, const InputVec& u,
                                       const SensitivityMatrix& pi, double dt,
                                       const GtmrParams& params);

/// Same step, also returning the propagated state.
struct SensitivityStep {
  StateVec next;
  SensitivityMatrix pi;
};

SensitivityStep rk4_sensitivity_step_full(const StateVec& x, const InputVec& u,
                                          const SensitivityMatrix& pi, double dt,
                                          const GtmrParams& params);

}  // namespace helixguard
