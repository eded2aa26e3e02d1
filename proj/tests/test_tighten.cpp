#include "helixguard/selfcheck.hpp"
#include "helixguard/tighten.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace helixguard;

namespace {

StateVec at(const Vec3& p) {
  State s;
  s.position = p;
  s.rotor_speeds.setConstant(GtmrParams{}.hover_rotor_speed());
  return s.flatten();
}

TighteningConfig table_config() {
  return TighteningConfig::from(GtmrParams{}, UncertaintyBounds::table_defaults(), 0.6, 0.025);
}

}  // namespace

TEST_CASE("clearance row on the x-axis and unit gradient") {
  const TowerGeometry tower;
  const StateRow row = clearance_jacobian_row(at(Vec3(1.35, 0, 4)), tower);
  StateRow expected = StateRow::Zero();
  expected[0] = -1.0;
  CHECK((row - expected).norm() < 1e-15);
  const StateRow diag = clearance_jacobian_row(at(Vec3(-0.7, 1.1, 0)), tower);
  CHECK(diag.head<2>().norm() == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(diag.tail<16>().norm() == 0.0);
  CHECK_THROWS_AS(clearance_jacobian_row(at(Vec3(0, 0, 1)), tower), DegenerateAxisError);
}

TEST_CASE("clearance row matches finite differences of y") {
  const TowerGeometry tower;
  const StateVec x = at(Vec3(0.9, -1.0, 2.0));
  const Eigen::MatrixXd fd = oracle::central_difference(
      [&](const Eigen::VectorXd& v) -> Eigen::VectorXd {
        return Eigen::VectorXd::Constant(1, tower.d_min - tower_distance(v.head<3>(), tower));
      },
      x, Eigen::VectorXd::Constant(kStateDim, 1e-6));
  CHECK((clearance_jacobian_row(x, tower) - fd).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("constraint sensitivity ignores rotor rows and vanishes at reset") {
  const TowerGeometry tower;
  const StateVec x = at(Vec3(1.35, 0.2, 1));
  CHECK(constraint_sensitivity(x, SensitivityMatrix::Zero(), tower).norm() == 0.0);
  SensitivityMatrix pi = SensitivityMatrix::Zero();
  pi.middleRows<kRotors>(idx::kRotor).setConstant(3.0);
  CHECK(constraint_sensitivity(x, pi, tower).norm() == 0.0);
}

TEST_CASE("constraint sensitivity matches re-integrated clearance") {
  const GtmrParams p;
  const TowerGeometry tower;
  const UncertaintyBounds bounds = UncertaintyBounds::table_defaults();
  State s;
  s.position = Vec3(1.35, 0.0, 2.0);
  s.euler = Vec3(0.05, -0.04, 3.1);
  s.velocity = Vec3(0.1, 0.3, 0.05);
  s.body_rates = Vec3(0.1, -0.1, 0.05);
  for (int j = 0; j < kRotors; ++j) {
    s.rotor_speeds[j] = p.hover_rotor_speed() + (j % 2 ? 3.0 : -2.0);
  }
  const StateVec x0 = s.flatten();
  const int horizon = 20;
  const double dt = 0.025;
  InputVec u;
  u << 5, -3, 2, -4, 1, 6;

  StateVec x = x0;
  SensitivityMatrix pi = SensitivityMatrix::Zero();
  for (int i = 0; i < horizon; ++i) {
    const SensitivityStep st = rk4_sensitivity_step_full(x, u, pi, dt, p);
    x = st.next;
    pi = st.pi;
  }
  const ZetaRow pi_y = constraint_sensitivity(x, pi, tower);
  auto y_of = [&](const ZetaVec& zeta) {
    StateVec xs = x0;
    for (int i = 0; i < horizon; ++i) {
      xs = rk4_step(xs, u, zeta, Vec3::Zero(), dt, p);
    }
    return tower.d_min - tower_distance(xs.head<3>(), tower);
  };
  for (int j : {0, 4, 5, 6, 7}) {
    const double h = 1e-4 * bounds.upper[j];
    const double fd = (y_of(h * ZetaVec::Unit(j)) - y_of(-h * ZetaVec::Unit(j))) / (2 * h);
    CHECK(std::abs(pi_y[j] - fd) <= 1e-3 * std::abs(fd));
  }
}

TEST_CASE("parametric margin examples") {
  const UncertaintyBounds bounds = UncertaintyBounds::table_defaults();
  const TighteningConfig cfg = table_config();
  CHECK(parametric_margin(ZetaRow::Zero(), bounds, cfg) == cfg.epsilon_s);
  ZetaRow pi_y = ZetaRow::Zero();
  pi_y[0] = 0.5;
  pi_y[1] = -1.0;
  pi_y[6] = 0.2;
  const double brute = oracle::margin_by_vertices(pi_y, bounds, cfg.epsilon_s);
  CHECK(brute == doctest::Approx(0.36 + 0.005).epsilon(1e-14));
  CHECK(parametric_margin(pi_y, bounds, cfg) == doctest::Approx(brute).epsilon(1e-15));
}

TEST_CASE("parametric margin: Hoelder bound and monotonicity") {
  const UncertaintyBounds bounds = UncertaintyBounds::table_defaults();
  const TighteningConfig cfg = table_config();
  std::mt19937_64 gen(5);
  std::normal_distribution<double> n(0.0, 1.0);
  for (int k = 0; k < 200; ++k) {
    ZetaRow pi_y;
    for (int j = 0; j < kZetaDim; ++j) {
      pi_y[j] = n(gen);
    }
    const double a = parametric_margin(pi_y, bounds, cfg);
    CHECK(a - cfg.epsilon_s <= pi_y.cwiseAbs().maxCoeff() * bounds.upper.sum() + 1e-15);
    ZetaRow bigger = pi_y;
    const int j = k % kZetaDim;
    bigger[j] *= 1.5;
    CHECK(parametric_margin(bigger, bounds, cfg) >= a);
    CHECK(tightened_bound(3, bigger, bounds, cfg, TowerGeometry{}) >=
          tightened_bound(3, pi_y, bounds, cfg, TowerGeometry{}));
  }
}

TEST_CASE("closed-form margin equals the vertex maximum") {
  const SuiteResult r = check_margin_vertices(1000);
  INFO(r.detail);
  CHECK(r.metric <= 1e-12);
  CHECK(r.seconds < 5.0);
}

TEST_CASE("gust margin values") {
  const TighteningConfig cfg = table_config();
  CHECK(cfg.mass_min == doctest::Approx(0.9 * 2.57).epsilon(1e-15));
  CHECK(gust_margin(0, cfg) == 0.0);
  const double expected = 0.5 * (0.6 / (0.9 * 2.57)) * std::pow(20 * 0.025, 2);
  CHECK(gust_margin(20, cfg) == doctest::Approx(expected).epsilon(1e-14));
  CHECK(gust_margin(20, cfg) == doctest::Approx(0.03243).epsilon(1e-3));
  for (int i = 1; i <= 10; ++i) {
    CHECK(gust_margin(2 * i, cfg) == doctest::Approx(4.0 * gust_margin(i, cfg)).epsilon(1e-14));
  }
}

TEST_CASE("tightened bound composition") {
  const TighteningConfig cfg = table_config();
  const UncertaintyBounds bounds = UncertaintyBounds::table_defaults();
  const TowerGeometry tower;
  CHECK(tightened_bound(0, ZetaRow::Zero(), bounds, cfg, tower) == doctest::Approx(0.205).epsilon(1e-15));
  CHECK(tightened_bound(20, ZetaRow::Zero(), bounds, cfg, tower) ==
        doctest::Approx(0.20 + 0.005 + gust_margin(20, cfg)).epsilon(1e-15));
}

TEST_CASE("gust margin dominates the worst constant gust") {
  const SuiteResult r = check_gust_margin(100);
  INFO(r.detail);
  CHECK(r.metric <= 1e-9);
}

TEST_CASE("first-order soundness for small uncertainty") {
  const GtmrParams p;
  const TowerGeometry tower;
  const UncertaintyBounds bounds = UncertaintyBounds::table_defaults();
  const TighteningConfig cfg = table_config();
  State s;
  s.position = Vec3(0.0, 1.35, 3.0);
  s.velocity = Vec3(-0.3, 0.0, 0.05);
  s.rotor_speeds.setConstant(p.hover_rotor_speed());
  const int horizon = 20;
  std::vector<StateVec> states{s.flatten()};
  std::vector<InputVec> inputs(horizon, InputVec::Constant(2.0));
  for (int i = 0; i < horizon; ++i) {
    states.push_back(rk4_step(states.back(), inputs[i], ZetaVec::Zero(), Vec3::Zero(), 0.025, p));
  }
  TighteningConfig no_slack = cfg;
  no_slack.epsilon_s = 0.0;
  const HorizonMargins margins = horizon_margins(states, inputs, p, tower, bounds, no_slack);

  ZetaVec small_half = 1e-3 * bounds.upper;
  const UncertaintyBounds small = UncertaintyBounds::symmetric(small_half);
  const HorizonMargins small_margins = horizon_margins(states, inputs, p, tower, small, no_slack);
  for (int k = 0; k < 50; ++k) {
    const ZetaVec zeta = sample_uncertainty(small, 900 + k).flatten();
    StateVec x = states.front();
    for (int i = 0; i < horizon; ++i) {
      x = rk4_step(x, inputs[i], zeta, Vec3::Zero(), 0.025, p);
      const double dy = std::abs(tower_distance(x.head<3>(), tower) -
                                 tower_distance(states[i + 1].head<3>(), tower));
      CHECK(dy <= small_margins.parametric[i + 1] * (1.0 + 1e-2) + 1e-12);
    }
  }
  CHECK(margins.parametric.front() == 0.0);
  CHECK(margins.gust.front() == 0.0);
  CHECK(margins.parametric.back() > 0.0);
}
