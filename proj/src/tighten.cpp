#include "helixguard/tighten.hpp"

#include <cmath>
#include <stdexcept>

namespace helixguard {

TighteningConfig TighteningConfig::from(const GtmrParams& params,
                                        const UncertaintyBounds& bounds, double gust_bound,
                                        double sampling_time, double epsilon_s) {
  TighteningConfig cfg;
  cfg.epsilon_s = epsilon_s;
  cfg.gust_bound = gust_bound;
  cfg.mass_min = (1.0 - bounds.upper[zidx::kMass]) * params.mass;
  cfg.sampling_time = sampling_time;
  return cfg;
}

void TighteningConfig::validate() const {
  if (!(epsilon_s > 0.0)) {
    throw std::invalid_argument("epsilon_s must be positive");
  }
  if (!(gust_bound >= 0.0)) {
    throw std::invalid_argument("gust bound must be non-negative");
  }
  if (!(mass_min > 0.0)) {
    throw std::invalid_argument("minimum mass must be positive");
  }
  if (!(sampling_time > 0.0)) {
    throw std::invalid_argument("sampling time must be positive");
  }
}

StateRow clearance_jacobian_row(const StateVec& x, const TowerGeometry& /*geom*/) {
  const double px = x[idx::kPos];
  const double py = x[idx::kPos + 1];
  const double rho = std::hypot(px, py);
  if (rho < kAxisTolerance) {
    throw DegenerateAxisError("clearance Jacobian requested on the tower axis");
  }
  StateRow row = StateRow::Zero();
  row[idx::kPos] = -px / rho;
  row[idx::kPos + 1] = -py / rho;
  return row;
}

ZetaRow constraint_sensitivity(const StateVec& x, const SensitivityMatrix& pi,
                               const TowerGeometry& geom) {
  const StateRow j = clearance_jacobian_row(x, geom);
  // Only the horizontal position rows of J_yx are non-zero.
  return j[idx::kPos] * pi.row(idx::kPos) + j[idx::kPos + 1] * pi.row(idx::kPos + 1);
}

double parametric_margin(const ZetaRow& pi_y, const UncertaintyBounds& bounds,
                         const TighteningConfig& cfg) {
  return pi_y.cwiseAbs().dot(bounds.upper.transpose()) + cfg.epsilon_s;
}

double gust_margin(int stage, const TighteningConfig& cfg) {
  if (stage < 0) {
    throw std::invalid_argument("stage index must be non-negative");
  }
  const double tau = stage * cfg.sampling_time;
  return 0.5 * cfg.gust_acceleration_bound() * tau * tau;
}

double tightened_bound(int stage, const ZetaRow& pi_y, const UncertaintyBounds& bounds,
                       const TighteningConfig& cfg, const TowerGeometry& geom) {
  return geom.d_min + parametric_margin(pi_y, bounds, cfg) + gust_margin(stage, cfg);
}

std::vector<double> HorizonMargins::total() const {
  std::vector<double> out(parametric.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = parametric[i] + gust[i];
  }
  return out;
}

HorizonMargins horizon_margins(const std::vector<StateVec>& states,
                               const std::vector<InputVec>& inputs, const GtmrParams& params,
                               const TowerGeometry& geom, const UncertaintyBounds& bounds,
                               const TighteningConfig& cfg) {
  if (states.size() != inputs.size() + 1) {
    throw std::invalid_argument("horizon_margins expects N+1 states and N inputs");
  }
  const std::size_t n = inputs.size();
  HorizonMargins m;
  m.parametric.resize(n + 1);
  m.gust.resize(n + 1);
  SensitivityMatrix pi = SensitivityMatrix::Zero();
  for (std::size_t i = 0; i <= n; ++i) {
    m.parametric[i] = parametric_margin(constraint_sensitivity(states[i], pi, geom), bounds, cfg);
    m.gust[i] = gust_margin(static_cast<int>(i), cfg);
    if (i < n) {
      pi = rk4_sensitivity_step(states[i], inputs[i], pi, cfg.sampling_time, params);
    }
  }
  return m;
}

}  // namespace helixguard
