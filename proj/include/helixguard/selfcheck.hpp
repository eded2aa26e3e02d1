/**
 * @file selfcheck.hpp
 * @brief Oracle suites that validate the numerical core against independent
 * reference computations: finite differences, exhaustive vertex and
 * active-set enumeration, and Richardson order estimation.
 */
#pragma once

#include "helixguard/condense.hpp"
#include "helixguard/tighten.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace helixguard {

struct SuiteResult {
  std::string name;
  bool passed = false;
  double metric = 0.0;     // worst observed value
  double threshold = 0.0;  // pass limit for `metric`
  double seconds = 0.0;
  std::string detail;
};

namespace oracle {

/// max over the 2^9 box vertices of pi_y . zeta, plus eps_s.
double margin_by_vertices(const ZetaRow& pi_y, const UncertaintyBounds& bounds, double epsilon_s);

/**
 * @brief Solves a small strictly convex QP by trying every combination of
 * active one-sided constraints and keeping the KKT point that is primal
 * feasible with correctly signed multipliers. Exponential; for a handful of
 * constraints only. Returns false when no candidate qualifies.
 */
bool enumerate_qp(const QpProblem& qp, Eigen::VectorXd& z, double tol = 1e-9);

/// Central-difference Jacobian of a vector map.
template <typename F>
Eigen::MatrixXd central_difference(F&& f, const Eigen::VectorXd& x, const Eigen::VectorXd& step) {
  const Eigen::VectorXd f0 = f(x);
  Eigen::MatrixXd J(f0.size(), x.size());
  for (Eigen::Index j = 0; j < x.size(); ++j) {
    Eigen::VectorXd xp = x;
    Eigen::VectorXd xm = x;
    xp[j] += step[j];
    xm[j] -= step[j];
    J.col(j) = (f(xp) - f(xm)) / (2.0 * step[j]);
  }
  return J;
}

/// Double integrator along one axis with an input box, a velocity box and a
/// soft lower position bound, N stages. Deterministic in the seed.
LqSubproblem random_double_integrator(int horizon, std::uint64_t seed);

}  // namespace oracle

/// Continuous and discrete Jacobians against central differences.
SuiteResult check_jacobians(std::uint64_t seed = 11);
/// Pi dzeta against re-integrated perturbed trajectories over a full horizon.
SuiteResult check_sensitivity(std::uint64_t seed = 12);
/// Closed-form margin against the vertex maximum.
SuiteResult check_margin_vertices(int instances = 1000, std::uint64_t seed = 13);
/// Constant worst-case gust displacement of the full model against alpha_g.
SuiteResult check_gust_margin(int headings = 100, std::uint64_t seed = 14);
/// Condensed QP solutions against active-set enumeration on 3-step horizons.
SuiteResult check_qp_enumeration(int instances = 50, std::uint64_t seed = 15);
/// Observed global order of RK4 on the full dynamics over 1 s.
SuiteResult check_rk4_order();

std::vector<SuiteResult> run_all_checks();

}  // namespace helixguard
