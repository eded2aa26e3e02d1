#include "helixguard/integrate.hpp"
#include "helixguard/selfcheck.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace helixguard;

namespace {

StateVec hover(const GtmrParams& p) {
  State s;
  s.position = Vec3(1.35, 0.0, 2.0);
  s.rotor_speeds.setConstant(p.hover_rotor_speed());
  return s.flatten();
}

StateVec random_state(const GtmrParams& p, std::mt19937_64& gen) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  State s;
  s.position = Vec3(1.3 + 0.2 * u(gen), 0.3 * u(gen), 2.0 + u(gen));
  s.euler = Vec3(0.4 * u(gen), 0.4 * u(gen), 3.0 * u(gen));
  s.velocity = Vec3(u(gen), u(gen), 0.5 * u(gen));
  s.body_rates = Vec3(u(gen), u(gen), u(gen));
  for (int j = 0; j < kRotors; ++j) {
    s.rotor_speeds[j] = p.hover_rotor_speed() + 20.0 * u(gen);
  }
  return s.flatten();
}

}  // namespace

TEST_CASE("rk4 on a scalar linear ODE matches the exponential") {
  const double lambda = -3.0;
  const double dt = 0.05;
  const double x = 2.0;
  const double step = rk4([&](double v) { return lambda * v; }, x, dt);
  const double bound = std::pow(std::abs(lambda * dt), 5) / 120.0 * std::abs(x) * 2.0;
  CHECK(std::abs(step - std::exp(lambda * dt) * x) < bound);
}

TEST_CASE("rk4 keeps hover in equilibrium") {
  const GtmrParams p;
  const StateVec x = hover(p);
  const StateVec next = rk4_step(x, InputVec::Zero(), ZetaVec::Zero(), Vec3::Zero(), 0.025, p);
  CHECK((next - x).lpNorm<Eigen::Infinity>() < 1e-12);
}

TEST_CASE("rk4 global error has order four") {
  const SuiteResult r = check_rk4_order();
  INFO(r.detail);
  CHECK(r.metric >= 3.8);
  CHECK(r.metric <= 4.2);
}

TEST_CASE("continuous Jacobians match central differences at 100 states") {
  const GtmrParams p;
  const UncertaintyBounds bounds = UncertaintyBounds::table_defaults();
  std::mt19937_64 gen(2024);
  double worst = 0.0;
  for (int k = 0; k < 100; ++k) {
    const StateVec x = random_state(p, gen);
    InputVec u = InputVec::Zero();
    const ZetaVec zeta = sample_uncertainty(bounds, 500 + k).flatten();
    const Vec3 gust(0.3, -0.2, 0.1);
    const DynamicsJacobians jac = dynamics_jacobians(x, zeta, gust, p);
    const Eigen::MatrixXd fx = oracle::central_difference(
        [&](const Eigen::VectorXd& v) -> Eigen::VectorXd { return dynamics(StateVec(v), u, zeta, gust, p); },
        x, 1e-6 * x.cwiseAbs().cwiseMax(1.0));
    const Eigen::MatrixXd fz = oracle::central_difference(
        [&](const Eigen::VectorXd& v) -> Eigen::VectorXd { return dynamics(x, u, ZetaVec(v), gust, p); },
        zeta, Eigen::VectorXd::Constant(kZetaDim, 1e-6));
    const double scale_x = std::max(1.0, fx.cwiseAbs().maxCoeff());
    const double scale_z = std::max(1.0, fz.cwiseAbs().maxCoeff());
    worst = std::max({worst, (jac.dfdx - fx).cwiseAbs().maxCoeff() / scale_x,
                      (jac.dfdzeta - fz).cwiseAbs().maxCoeff() / scale_z});
  }
  CHECK(worst < 1e-6);
}

TEST_CASE("uncertainty Jacobian structure") {
  const GtmrParams p;
  std::mt19937_64 gen(7);
  const StateVec x = random_state(p, gen);
  const DynamicsJacobians jac = dynamics_jacobians(x, ZetaVec::Zero(), Vec3::Zero(), p);
  CHECK(jac.dfdzeta.middleRows<kRotors>(idx::kRotor).cwiseAbs().maxCoeff() == 0.0);
  const Mat3 wind = jac.dfdzeta.block<3, 3>(idx::kVel, zidx::kWind);
  CHECK((wind - Mat3::Identity() / p.mass).cwiseAbs().maxCoeff() < 1e-15);
  CHECK((input_jacobian().middleRows<kRotors>(idx::kRotor) - Eigen::Matrix<double, 6, 6>::Identity()).norm() == 0.0);
}

TEST_CASE("sensitivity after one step from a reset") {
  const GtmrParams p;
  const double dt = 0.025;
  const StateVec x = hover(p);
  const SensitivityMatrix pi = rk4_sensitivity_step(x, InputVec::Zero(), SensitivityMatrix::Zero(), dt, p);
  const ZetaJac fz = dynamics_jacobians(x, ZetaVec::Zero(), Vec3::Zero(), p).dfdzeta;
  CHECK((pi - dt * fz).cwiseAbs().maxCoeff() < 10.0 * dt * dt);
  CHECK(pi.middleRows<kRotors>(idx::kRotor).cwiseAbs().maxCoeff() == 0.0);
  // Heavier vehicle at hover thrust: vertical velocity sensitivity is
  // -(thrust acceleration) dt = -g dt to first order.
  CHECK(pi(idx::kVel + 2, zidx::kMass) < 0.0);
  CHECK(pi(idx::kVel + 2, zidx::kMass) == doctest::Approx(-p.gravity * dt).epsilon(1e-3));
}

TEST_CASE("horizon sensitivity matches re-integrated perturbations") {
  const SuiteResult r = check_sensitivity();
  INFO(r.detail);
  CHECK(r.metric < 1e-3);
}

TEST_CASE("discrete Jacobians match the finite-difference map") {
  const SuiteResult r = check_jacobians();
  INFO(r.detail);
  CHECK(r.passed);
}
