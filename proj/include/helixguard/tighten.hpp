/**
 * @file tighten.hpp
 * @brief Clearance-constraint sensitivity, the parametric tightening margin
 * and the stage-dependent gust margin.
 *
 * In standard form the clearance requirement reads y(x) = d_min - d_T(p) <= 0.
 * Along a predicted trajectory with sensitivities Pi_i, the tightened
 * requirement at stage i is
 *
 *   d_T(p_i) >= d_min + alpha_p,i + alpha_g,i,
 *   alpha_p,i = sum_j |(J_yx Pi_i)_j| wbar_j + eps_s,
 *   alpha_g,i = 0.5 (wbar_g / m_min) (i T_s)^2.
 */
#pragma once

#include "helixguard/geometry.hpp"
#include "helixguard/integrate.hpp"

#include <vector>

namespace helixguard {

struct TighteningConfig {
  double epsilon_s = 0.005;     // m
  double gust_bound = 0.6;      // N
  double mass_min = 0.9 * 2.57; // kg
  double sampling_time = 0.025; // s

  /// m_min = (1 - delta_m_bar) m0 from the model mass and the uncertainty box.
  static TighteningConfig from(const GtmrParams& params, const UncertaintyBounds& bounds,
                               double gust_bound, double sampling_time,
                               double epsilon_s = 0.005);
  void validate() const;
  [[nodiscard]] double gust_acceleration_bound() const { return gust_bound / mass_min; }
};

using StateRow = Eigen::Matrix<double, 1, kStateDim>;
using ZetaRow = Eigen::Matrix<double, 1, kZetaDim>;

/// J_yx = dy/dx = [-x/rho, -y/rho, 0, 0_{1x15}].
StateRow clearance_jacobian_row(const StateVec& x, const TowerGeometry& geom);

/// Pi_y = J_yx Pi.
ZetaRow constraint_sensitivity(const StateVec& x, const SensitivityMatrix& pi,
                               const TowerGeometry& geom);

/// Support function of the symmetric uncertainty box at Pi_y, plus eps_s.
double parametric_margin(const ZetaRow& pi_y, const UncertaintyBounds& bounds,
                         const TighteningConfig& cfg);

double gust_margin(int stage, const TighteningConfig& cfg);

/// d_min + alpha_p,i + alpha_g,i.
double tightened_bound(int stage, const ZetaRow& pi_y, const UncertaintyBounds& bounds,
                       const TighteningConfig& cfg, const TowerGeometry& geom);

/// Per-stage margins over a prediction horizon.
struct HorizonMargins {
  std::vector<double> parametric;  // alpha_p,i, i = 0..N
  std::vector<double> gust;        // alpha_g,i, i = 0..N

  [[nodiscard]] std::vector<double> total() const;
};

/**
 * @brief Resets Pi to zero at the first predicted state and propagates it
 * along (states, inputs), evaluating both margins at every stage.
 *
 * `states` holds N+1 predicted states and `inputs` N inputs.
 */
HorizonMargins horizon_margins(const std::vector<StateVec>& states,
                               const std::vector<InputVec>& inputs, const GtmrParams& params,
                               const TowerGeometry& geom, const UncertaintyBounds& bounds,
                               const TighteningConfig& cfg);

}  // namespace helixguard
