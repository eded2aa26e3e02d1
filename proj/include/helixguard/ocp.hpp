/**
 * @file ocp.hpp
 * @brief Finite-horizon tracking problem for helical inspection, in nominal
 * and tightened (robust) form, transcribed by multiple shooting.
 *
 * Stage cost:    ||h(x) - r||_Q^2 + ||omega||_Qw^2 + ||xi - xi_h||_Qxi^2 + ||u||_Qu^2,
 *                h(x) = [p; v; v_dot(x)]
 * Terminal cost: ||p - r_p||_Qf^2
 *
 * Every stage carries one soft clearance row d_T(p_i) + s_i >= b_i with
 * s_i >= 0 and an L1 penalty on s_i. Nominal problems use b_i = d_min;
 * robust problems use b_i = d_min + alpha_p,i + alpha_g,i.
 */
#pragma once

#include "helixguard/geometry.hpp"
#include "helixguard/model.hpp"

#include <optional>
#include <string>
#include <vector>

namespace helixguard {

enum class Variant { kNominal, kRobust };

const char* to_string(Variant v);
Variant variant_from_string(const std::string& s);

using Vec6 = Eigen::Matrix<double, kRotors, 1>;

struct NmpcConfig {
  int horizon = 20;
  double sampling_time = 0.025;  // s
  Vec3 Q_p{50.0, 50.0, 80.0};
  Vec3 Q_v{5.0, 5.0, 8.0};
  Vec3 Q_a{1.0, 1.0, 2.0};
  Vec6 Q_u = Vec6::Constant(1e-5);
  Vec3 Q_w{0.5, 0.5, 0.5};  // body rates
  double Q_xi = 0.01;       // rotor speeds about hover
  Vec3 Q_f{80.0, 80.0, 120.0};
  // Admissible sets X (rotor speeds) and U (rotor-speed rates).
  Vec6 rotor_speed_lower = Vec6::Constant(0.0);
  Vec6 rotor_speed_upper = Vec6::Constant(110.0);
  Vec6 rate_lower = Vec6::Constant(-80.0);
  Vec6 rate_upper = Vec6::Constant(80.0);
  double soft_penalty_weight = 1e4;

  /// Rotor-speed and rate boxes copied from the vehicle limits.
  void set_actuator_limits(const GtmrParams& params);
  void validate() const;
  /// Diagonal of Q = blkdiag(Q_p, Q_v, Q_a).
  [[nodiscard]] Eigen::Matrix<double, 9, 1> stage_weights() const;
};

struct OcpProblem {
  Variant variant = Variant::kNominal;
  StateVec initial_state = StateVec::Zero();
  double t0 = 0.0;
  std::vector<ReferencePoint> references;  // N+1
  std::vector<double> stage_bounds;        // N+1 clearance right-hand sides [m]
  NmpcConfig config;
  TowerGeometry geometry;
  GtmrParams params;

  [[nodiscard]] int horizon() const { return config.horizon; }
  /// Multiple-shooting decision count: (N+1) states, N inputs, N+1 slacks.
  [[nodiscard]] int decision_dimension() const;
  [[nodiscard]] int num_dynamics_blocks() const { return config.horizon; }
  [[nodiscard]] int num_clearance_rows() const { return config.horizon + 1; }
};

/// Tracked outputs h(x) = [p; v; v_dot(x)] at the nominal model without gust.
Eigen::Matrix<double, 9, 1> tracked_output(const StateVec& x, const GtmrParams& params);

double stage_cost(const StateVec& x, const InputVec& u, const ReferencePoint& r,
                  const NmpcConfig& cfg, const GtmrParams& params);

double terminal_cost(const StateVec& x, const ReferencePoint& r, const NmpcConfig& cfg);

/**
 * @brief Assembles the horizon problem starting at (x0, t0).
 *
 * For the robust variant `margins` must hold N+1 values alpha_p,i + alpha_g,i;
 * for the nominal variant it must be empty. Throws std::invalid_argument on a
 * length mismatch.
 */
OcpProblem build_ocp(Variant variant, const StateVec& x0, double t0,
                     const std::optional<std::vector<double>>& margins, const NmpcConfig& cfg,
                     const TowerGeometry& geom, const HelixSpec& helix, const GtmrParams& params);

/// Total objective (costs plus slack penalty) of a trajectory.
double trajectory_merit(const OcpProblem& problem, const std::vector<StateVec>& states,
                        const std::vector<InputVec>& inputs, const std::vector<double>& slacks);

}  // namespace helixguard
