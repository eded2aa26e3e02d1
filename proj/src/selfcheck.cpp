#include "helixguard/selfcheck.hpp"

#include "helixguard/geometry.hpp"
#include "helixguard/integrate.hpp"
#include "helixguard/qp.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <random>

namespace helixguard {

namespace {

using Clock = std::chrono::steady_clock;

double elapsed(Clock::time_point since) {
  return std::chrono::duration<double>(Clock::now() - since).count();
}

std::string fmt(const char* pattern, double a, double b = 0.0) {
  char buf[160];
  std::snprintf(buf, sizeof(buf), pattern, a, b);
  return buf;
}

constexpr int kMaxKkt = 48;
using KktMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, 0, kMaxKkt, kMaxKkt>;
using KktVector = Eigen::Matrix<double, Eigen::Dynamic, 1, 0, kMaxKkt, 1>;

struct OneSided {
  Eigen::VectorXd a;
  double b = 0.0;
  bool upper = false;
};

// Tilted, spinning state with spread rotor speeds so that every uncertainty
// channel and every Jacobian block is excited.
StateVec excited_state(const GtmrParams& params, std::mt19937_64& gen) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  State s;
  s.position = Vec3(1.35 + 0.1 * u(gen), 0.2 * u(gen), 2.0 + u(gen));
  s.euler = Vec3(0.1 * u(gen), 0.1 * u(gen), std::numbers::pi * u(gen));
  s.velocity = Vec3(0.5 * u(gen), 0.5 * u(gen), 0.2 * u(gen));
  s.body_rates = Vec3(0.3 * u(gen), 0.3 * u(gen), 0.3 * u(gen));
  for (int j = 0; j < kRotors; ++j) {
    s.rotor_speeds[j] = params.hover_rotor_speed() + 6.0 * u(gen);
  }
  return s.flatten();
}

InputVec random_input(std::mt19937_64& gen, double scale) {
  std::uniform_real_distribution<double> u(-scale, scale);
  InputVec v;
  for (int j = 0; j < kInputDim; ++j) {
    v[j] = u(gen);
  }
  return v;
}

double max_rel(const Eigen::MatrixXd& a, const Eigen::MatrixXd& ref) {
  return (a - ref).cwiseAbs().maxCoeff() / std::max(1.0, ref.cwiseAbs().maxCoeff());
}

}  // namespace

namespace oracle {

double margin_by_vertices(const ZetaRow& pi_y, const UncertaintyBounds& bounds,
                          double epsilon_s) {
  double best = -std::numeric_limits<double>::infinity();
  for (unsigned mask = 0; mask < (1u << kZetaDim); ++mask) {
    double v = 0.0;
    for (int j = 0; j < kZetaDim; ++j) {
      v += pi_y[j] * ((mask >> j) & 1u ? bounds.upper[j] : bounds.lower[j]);
    }
    best = std::max(best, v);
  }
  return best + epsilon_s;
}

bool enumerate_qp(const QpProblem& qp, Eigen::VectorXd& z, double tol) {
  const int n = qp.num_vars();
  const int me = static_cast<int>(qp.b_eq.size());

  // Pairs of one-sided constraints that cannot be active together.
  std::vector<std::vector<OneSided>> pairs;
  auto add = [&](const Eigen::VectorXd& a, double lo, double hi) {
    std::vector<OneSided> sides;
    if (std::isfinite(lo)) {
      sides.push_back({a, lo, false});
    }
    if (std::isfinite(hi)) {
      sides.push_back({a, hi, true});
    }
    if (!sides.empty()) {
      pairs.push_back(std::move(sides));
    }
  };
  for (int j = 0; j < n; ++j) {
    add(Eigen::VectorXd::Unit(n, j), qp.lb[j], qp.ub[j]);
  }
  for (Eigen::Index r = 0; r < qp.A.rows(); ++r) {
    add(qp.A.row(r).transpose(), qp.lbA[r], qp.ubA[r]);
  }

  auto feasible = [&](const Eigen::VectorXd& x) {
    if (me > 0 && (qp.A_eq * x - qp.b_eq).lpNorm<Eigen::Infinity>() > tol) {
      return false;
    }
    for (const auto& sides : pairs) {
      for (const auto& c : sides) {
        const double v = c.a.dot(x);
        if (c.upper ? v > c.b + tol : v < c.b - tol) {
          return false;
        }
      }
    }
    return true;
  };

  std::vector<int> choice(pairs.size(), 0);
  while (true) {
    std::vector<const OneSided*> active;
    for (std::size_t k = 0; k < pairs.size(); ++k) {
      if (choice[k] > 0) {
        active.push_back(&pairs[k][static_cast<std::size_t>(choice[k] - 1)]);
      }
    }
    const int m = me + static_cast<int>(active.size());
    if (m <= n && n + m <= kMaxKkt) {
      // [H -A'; A 0] [z; y] = [-g; b], stationarity H z + g = A' y.
      KktMatrix K = KktMatrix::Zero(n + m, n + m);
      KktVector rhs(n + m);
      K.topLeftCorner(n, n) = qp.H;
      rhs.head(n) = -qp.g;
      for (int r = 0; r < me; ++r) {
        K.block(n + r, 0, 1, n) = qp.A_eq.row(r);
        K.block(0, n + r, n, 1) = -qp.A_eq.row(r).transpose();
        rhs[n + r] = qp.b_eq[r];
      }
      for (std::size_t k = 0; k < active.size(); ++k) {
        const int r = n + me + static_cast<int>(k);
        K.block(r, 0, 1, n) = active[k]->a.transpose();
        K.block(0, r, n, 1) = -active[k]->a;
        rhs[r] = active[k]->b;
      }
      const Eigen::FullPivLU<KktMatrix> lu(K);
      if (lu.isInvertible()) {
        const KktVector sol = lu.solve(rhs);
        const Eigen::VectorXd x = sol.head(n);
        bool ok = feasible(x);
        for (std::size_t k = 0; ok && k < active.size(); ++k) {
          const double y = sol[n + me + static_cast<int>(k)];
          ok = active[k]->upper ? y <= tol : y >= -tol;
        }
        if (ok) {
          z = x;
          return true;
        }
      }
    }
    std::size_t k = 0;
    while (k < pairs.size() && choice[k] == static_cast<int>(pairs[k].size())) {
      choice[k] = 0;
      ++k;
    }
    if (k == pairs.size()) {
      return false;
    }
    ++choice[k];
  }
}

LqSubproblem random_double_integrator(int horizon, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  auto in = [&](double lo, double hi) { return lo + (hi - lo) * 0.5 * (u(gen) + 1.0); };
  const double dt = 0.1;

  LqSubproblem lq;
  lq.N = horizon;
  lq.nx = 2;
  lq.nu = 1;
  Eigen::Matrix2d A;
  A << 1.0, dt, 0.0, 1.0;
  const Eigen::Vector2d B(0.5 * dt * dt, dt);
  lq.dx0 = Eigen::Vector2d(0.3 * u(gen), 0.3 * u(gen));
  for (int i = 0; i < horizon; ++i) {
    lq.A.push_back(A);
    lq.B.push_back(B);
    lq.d.push_back(Eigen::Vector2d(0.05 * u(gen), 0.05 * u(gen)));
    lq.Ru.push_back(Eigen::VectorXd::Constant(1, in(0.01, 0.1)));
    lq.u_lin.push_back(Eigen::VectorXd::Constant(1, 0.5 * u(gen)));
    lq.du_lb.push_back(Eigen::VectorXd::Constant(1, -in(0.2, 1.5)));
    lq.du_ub.push_back(Eigen::VectorXd::Constant(1, in(0.2, 1.5)));
  }
  for (int i = 0; i <= horizon; ++i) {
    lq.C.push_back(Eigen::Matrix2d::Identity());
    lq.res.push_back(Eigen::Vector2d(u(gen), u(gen)));
    lq.W.push_back(Eigen::Vector2d(in(0.5, 5.0), in(0.5, 5.0)));
    lq.x_lin.push_back(Eigen::Vector2d(0.5 * u(gen), 0.1 * u(gen)));
    SoftRow row;
    row.a = Eigen::Vector2d(1.0, 0.0);
    row.c = 0.5 * u(gen);
    lq.soft.push_back(row);
  }
  lq.bounded_states = {1};
  // du = 0 keeps |v| <= 0.1 + 0.3 + 3 * 0.05 inside the box, so every
  // instance is feasible.
  lq.x_lb = Eigen::VectorXd::Constant(1, -in(0.6, 1.2));
  lq.x_ub = Eigen::VectorXd::Constant(1, in(0.6, 1.2));
  lq.soft_weight = in(0.5, 20.0);
  lq.reg = 1e-6;
  return lq;
}

}  // namespace oracle

SuiteResult check_jacobians(std::uint64_t seed) {
  const auto start = Clock::now();
  const GtmrParams params;
  const UncertaintyBounds bounds = UncertaintyBounds::table_defaults();
  std::mt19937_64 gen(seed);
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const StateVec x = excited_state(params, gen);
    const InputVec u = random_input(gen, 20.0);
    const ZetaVec zeta = sample_uncertainty(bounds, seed * 1000 + trial).flatten();
    const Vec3 gust = 0.3 * random_input(gen, 1.0).head<3>();

    const DynamicsJacobians jac = dynamics_jacobians(x, zeta, gust, params);
    const Eigen::VectorXd hx = 1e-6 * x.cwiseAbs().cwiseMax(1.0);
    const Eigen::MatrixXd fd_x = oracle::central_difference(
        [&](const Eigen::VectorXd& v) -> Eigen::VectorXd {
          return dynamics(StateVec(v), u, zeta, gust, params);
        },
        x, hx);
    const Eigen::MatrixXd fd_z = oracle::central_difference(
        [&](const Eigen::VectorXd& v) -> Eigen::VectorXd {
          return dynamics(x, u, ZetaVec(v), gust, params);
        },
        zeta, Eigen::VectorXd::Constant(kZetaDim, 1e-6));
    worst = std::max({worst, max_rel(jac.dfdx, fd_x), max_rel(jac.dfdzeta, fd_z)});

    const DiscreteLinearization lin = rk4_linearize(x, u, 0.025, params);
    const Eigen::MatrixXd fd_a = oracle::central_difference(
        [&](const Eigen::VectorXd& v) -> Eigen::VectorXd {
          return rk4_step(StateVec(v), u, ZetaVec::Zero(), Vec3::Zero(), 0.025, params);
        },
        x, hx);
    const Eigen::MatrixXd fd_b = oracle::central_difference(
        [&](const Eigen::VectorXd& v) -> Eigen::VectorXd {
          return rk4_step(x, InputVec(v), ZetaVec::Zero(), Vec3::Zero(), 0.025, params);
        },
        u, Eigen::VectorXd::Constant(kInputDim, 1e-5));
    worst = std::max({worst, max_rel(lin.A, fd_a), max_rel(lin.B, fd_b)});
  }
  SuiteResult r;
  r.name = "jacobians";
  r.metric = worst;
  r.threshold = 1e-6;
  r.passed = worst < r.threshold;
  r.seconds = elapsed(start);
  r.detail = fmt("max relative Jacobian error %.3e over 100 states", worst);
  return r;
}

SuiteResult check_sensitivity(std::uint64_t seed) {
  const auto start = Clock::now();
  const GtmrParams params;
  const UncertaintyBounds bounds = UncertaintyBounds::table_defaults();
  const int horizon = 20;
  const double dt = 0.025;
  std::mt19937_64 gen(seed);
  const StateVec x0 = excited_state(params, gen);
  std::vector<InputVec> inputs;
  for (int i = 0; i < horizon; ++i) {
    inputs.push_back(random_input(gen, 20.0));
  }

  StateVec x = x0;
  SensitivityMatrix pi = SensitivityMatrix::Zero();
  for (int i = 0; i < horizon; ++i) {
    const SensitivityStep step = rk4_sensitivity_step_full(x, inputs[i], pi, dt, params);
    x = step.next;
    pi = step.pi;
  }

  auto rollout = [&](const ZetaVec& zeta) {
    StateVec xs = x0;
    for (int i = 0; i < horizon; ++i) {
      xs = rk4_step(xs, inputs[i], zeta, Vec3::Zero(), dt, params);
    }
    return xs;
  };

  double worst = 0.0;
  int worst_channel = 0;
  for (int j = 0; j < kZetaDim; ++j) {
    const double h = 1e-4 * bounds.upper[j];
    const ZetaVec dz = h * ZetaVec::Unit(j);
    const StateVec fd = 0.5 * (rollout(dz) - rollout(-dz));
    const StateVec lin = pi * dz;
    const double err = (lin - fd).norm() / fd.norm();
    if (err > worst) {
      worst = err;
      worst_channel = j;
    }
  }
  SuiteResult r;
  r.name = "sensitivity";
  r.metric = worst;
  r.threshold = 1e-3;
  r.passed = worst < r.threshold;
  r.seconds = elapsed(start);
  r.detail = fmt("worst relative error %.3e (channel %.0f) over a 20-stage horizon", worst,
                 worst_channel);
  return r;
}

SuiteResult check_margin_vertices(int instances, std::uint64_t seed) {
  const auto start = Clock::now();
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> width(0.01, 1.0);
  TighteningConfig cfg;
  double worst = 0.0;
  for (int k = 0; k < instances; ++k) {
    ZetaVec half;
    ZetaRow pi_y;
    for (int j = 0; j < kZetaDim; ++j) {
      half[j] = width(gen);
      pi_y[j] = normal(gen) * std::pow(10.0, normal(gen));
    }
    const UncertaintyBounds bounds = UncertaintyBounds::symmetric(half);
    const double closed = parametric_margin(pi_y, bounds, cfg);
    const double brute = oracle::margin_by_vertices(pi_y, bounds, cfg.epsilon_s);
    worst = std::max(worst, std::abs(closed - brute));
  }
  SuiteResult r;
  r.name = "margin-vertices";
  r.metric = worst;
  r.threshold = 1e-12;
  r.seconds = elapsed(start);
  r.passed = worst <= r.threshold && r.seconds < 5.0;
  r.detail = fmt("max |closed form - vertex max| %.3e over %.0f instances", worst, instances);
  return r;
}

SuiteResult check_gust_margin(int headings, std::uint64_t seed) {
  const auto start = Clock::now();
  const GtmrParams params;
  const TowerGeometry tower;
  const UncertaintyBounds bounds = UncertaintyBounds::table_defaults();
  TighteningConfig cfg = TighteningConfig::from(params, bounds, 0.6, 0.025);
  const int horizon = 20;
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> angle(-std::numbers::pi, std::numbers::pi);

  // Lightest admissible vehicle, so the gust acceleration is the largest.
  ZetaVec zeta = ZetaVec::Zero();
  zeta[zidx::kMass] = bounds.lower[zidx::kMass];

  double worst_ratio = 0.0;
  double worst_excess = -std::numeric_limits<double>::infinity();
  for (int k = 0; k < headings; ++k) {
    const double phase = angle(gen);
    const double heading = angle(gen);
    State s;
    s.position = Vec3(1.35 * std::cos(phase), 1.35 * std::sin(phase), 3.0);
    s.euler = Vec3(0.0, 0.0, phase + std::numbers::pi);
    s.rotor_speeds.setConstant(params.hover_rotor_speed());
    const Vec3 gust = cfg.gust_bound * Vec3(std::cos(heading), std::sin(heading), 0.0);

    StateVec calm = s.flatten();
    StateVec gusty = calm;
    for (int i = 1; i <= horizon; ++i) {
      calm = rk4_step(calm, InputVec::Zero(), zeta, Vec3::Zero(), cfg.sampling_time, params);
      gusty = rk4_step(gusty, InputVec::Zero(), zeta, gust, cfg.sampling_time, params);
      const double inward = tower_distance(calm.head<3>(), tower) -
                            tower_distance(gusty.head<3>(), tower);
      const double alpha = gust_margin(i, cfg);
      worst_excess = std::max(worst_excess, inward - alpha);
      worst_ratio = std::max(worst_ratio, inward / alpha);
    }
  }
  SuiteResult r;
  r.name = "gust-margin";
  r.metric = worst_excess;
  r.threshold = 0.0;
  r.passed = worst_excess <= 1e-12;
  r.seconds = elapsed(start);
  r.detail = fmt("max inward displacement / alpha_g = %.4f over %.0f headings", worst_ratio,
                 headings);
  return r;
}

SuiteResult check_qp_enumeration(int instances, std::uint64_t seed) {
  const auto start = Clock::now();
  double worst = 0.0;
  int failures = 0;
  for (int k = 0; k < instances; ++k) {
    const LqSubproblem lq = oracle::random_double_integrator(3, seed * 7919 + k);
    const QpProblem qp = condense(lq);
    Eigen::VectorXd z_ref;
    if (!oracle::enumerate_qp(qp, z_ref)) {
      ++failures;
      continue;
    }
    const QpSolution cold = solve_qp(qp);
    QpOptions hot;
    hot.hint = &cold.active;
    const QpSolution warm = solve_qp(qp, hot);
    if (cold.status != QpStatus::kOptimal || warm.status != QpStatus::kOptimal) {
      ++failures;
      continue;
    }
    worst = std::max({worst, (cold.z - z_ref).lpNorm<Eigen::Infinity>(),
                      (warm.z - z_ref).lpNorm<Eigen::Infinity>()});
  }
  SuiteResult r;
  r.name = "qp-enumeration";
  r.metric = failures > 0 ? std::numeric_limits<double>::infinity() : worst;
  r.threshold = 1e-8;
  r.passed = failures == 0 && worst < r.threshold;
  r.seconds = elapsed(start);
  r.detail = fmt("max |z - z_enum| %.3e, %.0f unsolved instances", worst, failures);
  return r;
}

SuiteResult check_rk4_order() {
  const auto start = Clock::now();
  const GtmrParams params;
  std::mt19937_64 gen(16);
  const StateVec x0 = excited_state(params, gen);
  const InputVec u = random_input(gen, 10.0);
  const ZetaVec zeta = ZetaVec::Zero();
  const Vec3 gust(0.2, -0.1, 0.05);

  auto integrate = [&](int steps) {
    const double dt = 1.0 / steps;
    StateVec x = x0;
    for (int k = 0; k < steps; ++k) {
      x = rk4_step(x, u, zeta, gust, dt, params);
    }
    return x;
  };
  const StateVec ref = integrate(100000);
  const double e_coarse = (integrate(25) - ref).norm();
  const double e_fine = (integrate(50) - ref).norm();
  const double order = std::log2(e_coarse / e_fine);

  SuiteResult r;
  r.name = "rk4-order";
  r.metric = order;
  r.threshold = 4.0;
  r.passed = order >= 3.8 && order <= 4.2;
  r.seconds = elapsed(start);
  r.detail = fmt("observed order %.4f (error %.3e at dt = 0.02 s)", order, e_fine);
  return r;
}

std::vector<SuiteResult> run_all_checks() {
  return {check_jacobians(), check_sensitivity(), check_margin_vertices(),
          check_gust_margin(), check_qp_enumeration(), check_rk4_order()};
}

}  // namespace helixguard
