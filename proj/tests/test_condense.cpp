#include "helixguard/condense.hpp"
#include "helixguard/selfcheck.hpp"

#include <doctest.h>

#include <random>

using namespace helixguard;

namespace {

// Direct evaluation of the subproblem objective by forward simulation.
double lq_objective(const LqSubproblem& lq, const Eigen::VectorXd& du, const Eigen::VectorXd& s) {
  Eigen::VectorXd dx = lq.dx0;
  double f = 0.0;
  for (int i = 0; i <= lq.N; ++i) {
    const Eigen::VectorXd r = lq.res[i] + lq.C[i] * dx;
    f += r.dot(lq.W[i].asDiagonal() * r);
    if (i < lq.N) {
      const Eigen::VectorXd ui = du.segment(i * lq.nu, lq.nu);
      const Eigen::VectorXd uu = lq.u_lin[i] + ui;
      f += uu.dot(lq.Ru[i].asDiagonal() * uu);
      dx = lq.A[i] * dx + lq.B[i] * ui + lq.d[i];
    }
  }
  f += lq.soft_weight * s.sum();
  f += 0.5 * lq.reg * (du.squaredNorm() + s.squaredNorm());
  return f;
}

double qp_value(const QpProblem& qp, const Eigen::VectorXd& z) {
  return 0.5 * z.dot(qp.H * z) + qp.g.dot(z);
}

}  // namespace

TEST_CASE("condensed objective differs from the direct objective by a constant") {
  const LqSubproblem lq = oracle::random_double_integrator(6, 3);
  const QpProblem qp = condense(lq);
  REQUIRE(qp.num_vars() == 6 + 7);
  std::mt19937_64 gen(4);
  std::normal_distribution<double> nd(0.0, 1.0);
  double offset = 0.0;
  for (int k = 0; k < 10; ++k) {
    Eigen::VectorXd z(qp.num_vars());
    for (Eigen::Index j = 0; j < z.size(); ++j) {
      z[j] = nd(gen);
    }
    const double diff = lq_objective(lq, z.head(6), z.tail(7)) - qp_value(qp, z);
    if (k == 0) {
      offset = diff;
    }
    CHECK(diff == doctest::Approx(offset).epsilon(1e-10));
  }
}

TEST_CASE("expanded states follow the linear dynamics") {
  const LqSubproblem lq = oracle::random_double_integrator(5, 8);
  const Eigen::VectorXd du = Eigen::VectorXd::LinSpaced(5, -0.3, 0.4);
  const std::vector<Eigen::VectorXd> xs = expand_states(lq, du);
  REQUIRE(xs.size() == 6);
  CHECK((xs[0] - lq.dx0).norm() == 0.0);
  for (int i = 0; i < 5; ++i) {
    CHECK((xs[i + 1] - (lq.A[i] * xs[i] + lq.B[i] * du.segment(i, 1) + lq.d[i])).norm() < 1e-15);
  }
}

TEST_CASE("condensed and sparse QPs agree") {
  for (int horizon : {3, 10}) {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      const LqSubproblem lq = oracle::random_double_integrator(horizon, 1000 + seed);
      const QpSolution c = solve_qp(condense(lq));
      const QpSolution s = solve_qp(sparse_qp(lq));
      REQUIRE(c.status == QpStatus::kOptimal);
      REQUIRE(s.status == QpStatus::kOptimal);
      const int nxs = (horizon + 1) * lq.nx;
      CHECK((c.z - s.z.tail(c.z.size())).lpNorm<Eigen::Infinity>() < 1e-8);
      const std::vector<Eigen::VectorXd> xs = expand_states(lq, c.z.head(horizon * lq.nu));
      for (int i = 0; i <= horizon; ++i) {
        CHECK((xs[i] - s.z.segment(i * lq.nx, lq.nx)).lpNorm<Eigen::Infinity>() < 1e-8);
      }
      CHECK(s.z.size() == nxs + c.z.size());
    }
  }
}

TEST_CASE("condensed 3-step QPs match active-set enumeration") {
  const SuiteResult r = check_qp_enumeration(50);
  INFO(r.detail);
  CHECK(r.metric < 1e-8);
}

TEST_CASE("inconsistent subproblems are rejected") {
  LqSubproblem lq = oracle::random_double_integrator(3, 1);
  lq.W.pop_back();
  CHECK_THROWS_AS(condense(lq), std::invalid_argument);
  lq = oracle::random_double_integrator(3, 1);
  lq.soft.pop_back();
  CHECK_THROWS_AS(sparse_qp(lq), std::invalid_argument);
}
