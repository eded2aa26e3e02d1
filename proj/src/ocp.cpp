#include "helixguard/ocp.hpp"

#include <stdexcept>
#include <string>

namespace helixguard {

const char* to_string(Variant v) { return v == Variant::kNominal ? "nominal" : "robust"; }

Variant variant_from_string(const std::string& s) {
  if (s == "nominal") {
    return Variant::kNominal;
  }
  if (s == "robust") {
    return Variant::kRobust;
  }
  throw std::invalid_argument("unknown controller variant '" + s + "'");
}

void NmpcConfig::set_actuator_limits(const GtmrParams& params) {
  rotor_speed_lower.setConstant(params.rotor_speed_min);
  rotor_speed_upper.setConstant(params.rotor_speed_max);
  rate_lower.setConstant(-params.rotor_rate_max);
  rate_upper.setConstant(params.rotor_rate_max);
}

void NmpcConfig::validate() const {
  if (horizon < 1) {
    throw std::invalid_argument("horizon must be at least 1");
  }
  if (!(sampling_time > 0.0)) {
    throw std::invalid_argument("sampling time must be positive");
  }
  const bool weights_ok = (Q_p.array() >= 0).all() && (Q_v.array() >= 0).all() &&
                          (Q_a.array() >= 0).all() && (Q_u.array() >= 0).all() &&
                          (Q_w.array() >= 0).all() && Q_xi >= 0.0 &&
                          (Q_f.array() >= 0).all() && soft_penalty_weight >= 0.0;
  if (!weights_ok) {
    throw std::invalid_argument("NMPC weights must be non-negative");
  }
  if (!((rotor_speed_lower.array() < rotor_speed_upper.array()).all() &&
        (rate_lower.array() < rate_upper.array()).all())) {
    throw std::invalid_argument("actuator boxes must have lower < upper");
  }
}

Eigen::Matrix<double, 9, 1> NmpcConfig::stage_weights() const {
  Eigen::Matrix<double, 9, 1> w;
  w << Q_p, Q_v, Q_a;
  return w;
}

int OcpProblem::decision_dimension() const {
  const int n = config.horizon;
  return (n + 1) * kStateDim + n * kInputDim + (n + 1);
}

Eigen::Matrix<double, 9, 1> tracked_output(const StateVec& x, const GtmrParams& params) {
  const StateVec dx = dynamics(x, InputVec::Zero(), ZetaVec::Zero(), Vec3::Zero(), params);
  Eigen::Matrix<double, 9, 1> h;
  h << x.segment<3>(idx::kPos), x.segment<3>(idx::kVel), dx.segment<3>(idx::kVel);
  return h;
}

double stage_cost(const StateVec& x, const InputVec& u, const ReferencePoint& r,
                  const NmpcConfig& cfg, const GtmrParams& params) {
  Eigen::Matrix<double, 9, 1> ref;
  ref << r.position, r.velocity, r.acceleration;
  const Eigen::Matrix<double, 9, 1> e = tracked_output(x, params) - ref;
  const Vec3 w = x.segment<3>(idx::kRates);
  const double spread = (x.segment<kRotors>(idx::kRotor).array() - params.hover_rotor_speed())
                            .matrix()
                            .squaredNorm();
  return e.dot(cfg.stage_weights().cwiseProduct(e)) + w.dot(cfg.Q_w.cwiseProduct(w)) +
         cfg.Q_xi * spread + u.dot(cfg.Q_u.cwiseProduct(u));
}

double terminal_cost(const StateVec& x, const ReferencePoint& r, const NmpcConfig& cfg) {
  const Vec3 e = x.segment<3>(idx::kPos) - r.position;
  return e.dot(cfg.Q_f.cwiseProduct(e));
}

OcpProblem build_ocp(Variant variant, const StateVec& x0, double t0,
                     const std::optional<std::vector<double>>& margins, const NmpcConfig& cfg,
                     const TowerGeometry& geom, const HelixSpec& helix, const GtmrParams& params) {
  const int n = cfg.horizon;
  OcpProblem p;
  p.variant = variant;
  p.initial_state = x0;
  p.t0 = t0;
  p.config = cfg;
  p.geometry = geom;
  p.params = params;
  p.references.reserve(n + 1);
  for (int i = 0; i <= n; ++i) {
    p.references.push_back(helix_reference(t0 + i * cfg.sampling_time, helix));
  }
  p.stage_bounds.assign(n + 1, geom.d_min);
  if (variant == Variant::kRobust) {
    if (!margins || static_cast<int>(margins->size()) != n + 1) {
      throw std::invalid_argument("robust problem needs N+1 clearance margins");
    }
    for (int i = 0; i <= n; ++i) {
      p.stage_bounds[i] += (*margins)[i];
    }
  } else if (margins && !margins->empty()) {
    throw std::invalid_argument("nominal problem takes no clearance margins");
  }
  return p;
}

double trajectory_merit(const OcpProblem& problem, const std::vector<StateVec>& states,
                        const std::vector<InputVec>& inputs, const std::vector<double>& slacks) {
  const int n = problem.horizon();
  double merit = 0.0;
  for (int i = 0; i < n; ++i) {
    merit += stage_cost(states[i], inputs[i], problem.references[i], problem.config,
                        problem.params);
  }
  merit += terminal_cost(states[n], problem.references[n], problem.config);
  for (double s : slacks) {
    merit += problem.config.soft_penalty_weight * s;
  }
  return merit;
}

}  // namespace helixguard
