#include "helixguard/integrate.hpp"

namespace helixguard {

StateVec rk4_step(const StateVec& x, const InputVec& u, const ZetaVec& zeta, const Vec3& gust,
                  double dt, const GtmrParams& params) {
  return rk4([&](const StateVec& s) { return dynamics(s, u, zeta, gust, params); }, x, dt);
}

DiscreteLinearization rk4_linearize(const StateVec& x, const InputVec& u, double dt,
                                    const GtmrParams& params) {
  const ZetaVec zeta = ZetaVec::Zero();
  const Vec3 gust = Vec3::Zero();
  const InputJac fu = input_jacobian();

  // Variational RK4: each stage derivative k_j is differentiated along with
  // its evaluation point.
  const StateVec k1 = dynamics(x, u, zeta, gust, params);
  const StateJac f1 = dynamics_jacobians(x, zeta, gust, params).dfdx;
  const StateJac k1x = f1;
  const InputJac k1u = fu;

  const StateVec x2 = x + 0.5 * dt * k1;
  const StateVec k2 = dynamics(x2, u, zeta, gust, params);
  const StateJac f2 = dynamics_jacobians(x2, zeta, gust, params).dfdx;
  const StateJac k2x = f2 + 0.5 * dt * (f2 * k1x);
  const InputJac k2u = 0.5 * dt * (f2 * k1u) + fu;

  const StateVec x3 = x + 0.5 * dt * k2;
  const StateVec k3 = dynamics(x3, u, zeta, gust, params);
  const StateJac f3 = dynamics_jacobians(x3, zeta, gust, params).dfdx;
  const StateJac k3x = f3 + 0.5 * dt * (f3 * k2x);
  const InputJac k3u = 0.5 * dt * (f3 * k2u) + fu;

  const StateVec x4 = x + dt * k3;
  const StateVec k4 = dynamics(x4, u, zeta, gust, params);
  const StateJac f4 = dynamics_jacobians(x4, zeta, gust, params).dfdx;
  const StateJac k4x = f4 + dt * (f4 * k3x);
  const InputJac k4u = dt * (f4 * k3u) + fu;

  DiscreteLinearization lin;
  lin.next = x + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  lin.A = StateJac::Identity() + (dt / 6.0) * (k1x + 2.0 * k2x + 2.0 * k3x + k4x);
  lin.B = (dt / 6.0) * (k1u + 2.0 * k2u + 2.0 * k3u + k4u);
  lin.xdot = k1;
  lin.fx = f1;
  return lin;
}

SensitivityStep rk4_sensitivity_step_full(const StateVec& x, const InputVec& u,
                                          const SensitivityMatrix& pi, double dt,
                                          const GtmrParams& params) {
  const ZetaVec zeta = ZetaVec::Zero();
  const Vec3 gust = Vec3::Zero();
  auto rhs = [&](const StateVec& s, const SensitivityMatrix& p, StateVec& ds,
                 SensitivityMatrix& dp) {
    ds = dynamics(s, u, zeta, gust, params);
    const DynamicsJacobians jac = dynamics_jacobians(s, zeta, gust, params);
    dp.noalias() = jac.dfdx * p;
    dp += jac.dfdzeta;
  };

  StateVec k1, k2, k3, k4;
  SensitivityMatrix p1, p2, p3, p4;
  rhs(x, pi, k1, p1);
  rhs(x + 0.5 * dt * k1, pi + 0.5 * dt * p1, k2, p2);
  rhs(x + 0.5 * dt * k2, pi + 0.5 * dt * p2, k3, p3);
  rhs(x + dt * k3, pi + dt * p3, k4, p4);

  SensitivityStep out;
  out.next = x + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  out.pi = pi + (dt / 6.0) * (p1 + 2.0 * p2 + 2.0 * p3 + p4);
  return out;
}

SensitivityMatrix rk4_sensitivity_step(const StateVec& x, const InputVec& u,
                                       const SensitivityMatrix& pi, double dt,
                                       const GtmrParams& params) {
  return rk4_sensitivity_step_full(x, u, pi, dt, params).pi;
}

}  // namespace helixguard
