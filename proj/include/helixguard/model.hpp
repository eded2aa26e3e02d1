/**
 * @file model.hpp
 * @brief Tilted hexarotor (GTMR) prediction model with structured uncertainty.
 *
 * The state is x = [p; eta; v; omega; xi] (18 entries): inertial position,
 * ZYX roll-pitch-yaw angles, inertial velocity, body rates and the six rotor
 * speeds. The input is the rotor-speed rate u = xi_dot.
 */
#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <stdexcept>

namespace helixguard {

inline constexpr int kRotors = 6;
inline constexpr int kStateDim = 12 + kRotors;
inline constexpr int kInputDim = kRotors;
inline constexpr int kZetaDim = 9;

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
using StateVec = Eigen::Matrix<double, kStateDim, 1>;
using InputVec = Eigen::Matrix<double, kInputDim, 1>;
using ZetaVec = Eigen::Matrix<double, kZetaDim, 1>;
using StateJac = Eigen::Matrix<double, kStateDim, kStateDim>;
using InputJac = Eigen::Matrix<double, kStateDim, kInputDim>;
using ZetaJac = Eigen::Matrix<double, kStateDim, kZetaDim>;
using AllocationMatrix = Eigen::Matrix<double, 6, kRotors>;

// Offsets into the flattened state.
namespace idx {
inline constexpr int kPos = 0;
inline constexpr int kEuler = 3;
inline constexpr int kVel = 6;
inline constexpr int kRates = 9;
inline constexpr int kRotor = 12;
}  // namespace idx

// Offsets into the flattened uncertainty vector.
namespace zidx {
inline constexpr int kMass = 0;
inline constexpr int kInertia = 1;
inline constexpr int kThrust = 4;
inline constexpr int kDrag = 5;
inline constexpr int kWind = 6;
}  // namespace zidx

/// Thrown when the Euler parametrization approaches its pitch singularity.
class GimbalLockError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Pitch magnitude at which the ZYX parametrization is considered singular.
inline constexpr double kGimbalLockLimit = 1.5607963267948966;  // pi/2 - 0.01

struct GtmrParams {
  int n_rotors = kRotors;
  double tilt_angle = 20.0 * 3.14159265358979323846 / 180.0;  // rad
  double mass = 2.57;                                          // kg
  Vec3 inertia_diag{0.11, 0.11, 0.19};                         // kg m^2
  double arm_length = 0.39;                                    // m
  double c_f = 11.8e-4;                                        // N / Hz^2
  double c_t = 2.5e-5;                                         // N m / Hz^2
  double gravity = 9.81;                                       // m / s^2
  double drag_coeff_nominal = 0.10;                            // N s / m
  double rotor_speed_min = 0.0;                                // Hz
  double rotor_speed_max = 110.0;                              // Hz
  double rotor_rate_max = 80.0;                                // Hz / s

  /// Throws std::invalid_argument naming the first violated invariant.
  void validate() const;

  /// Rotor speed at which the vertical thrust balances gravity at zero attitude.
  [[nodiscard]] double hover_rotor_speed() const;
};

/// Structured mismatch: relative mass, inertia, thrust and drag errors plus a
/// persistent wind-bias force.
struct UncertaintyVector {
  double delta_m = 0.0;
  Vec3 delta_J = Vec3::Zero();
  double delta_T = 0.0;
  double delta_D = 0.0;
  Vec3 wind_bias = Vec3::Zero();  // N

  [[nodiscard]] ZetaVec flatten() const;
  static UncertaintyVector unflatten(const ZetaVec& z);
  static UncertaintyVector nominal() { return {}; }
};

/// Symmetric box around the nominal uncertainty.
struct UncertaintyBounds {
  ZetaVec upper;
  ZetaVec lower;

  /// Symmetric box from its positive half-widths; throws on non-positive entries.
  static UncertaintyBounds symmetric(const ZetaVec& half_width);
  /// Bounds used in the inspection campaign.
  static UncertaintyBounds table_defaults();
  /// Requires lower = -upper and upper > 0 componentwise.
  void validate() const;
};

struct State {
  Vec3 position = Vec3::Zero();
  Vec3 euler = Vec3::Zero();  // roll, pitch, yaw
  Vec3 velocity = Vec3::Zero();
  Vec3 body_rates = Vec3::Zero();
  Eigen::Matrix<double, kRotors, 1> rotor_speeds = Eigen::Matrix<double, kRotors, 1>::Zero();

  [[nodiscard]] StateVec flatten() const;
  static State unflatten(const StateVec& x);
};

struct ControlInput {
  InputVec rotor_rates = InputVec::Zero();
};

/**
 * @brief Constant map from per-rotor thrust magnitudes [N] to the body wrench
 * [force; torque].
 *
 * Rotor i sits at azimuth i*60 deg on an arm of length d, its thrust axis is
 * tilted by (-1)^i * alpha about the arm, and it spins with sign (-1)^i, which
 * couples a reaction torque c_t/c_f along the thrust axis.
 */
AllocationMatrix allocation_matrix(const GtmrParams& params);

/// Body-to-inertial rotation for ZYX Euler angles [roll, pitch, yaw].
Mat3 rotation_from_euler(const Vec3& euler);

/**
 * @brief Continuous-time dynamics x_dot = f(x, u, zeta) + G_w w_g.
 *
 * The gust force enters the translational channel divided by the (perturbed)
 * vehicle mass, which at zeta = 0 is the constant selection G_w = I/m0.
 * Throws GimbalLockError when |pitch| >= pi/2 - 0.01.
 */
StateVec dynamics(const StateVec& x, const InputVec& u, const ZetaVec& zeta, const Vec3& gust,
                  const GtmrParams& params);

/// Analytic Jacobians of `dynamics` with respect to state and uncertainty.
/// The input Jacobian is constant (identity in the rotor rows) and omitted.
struct DynamicsJacobians {
  StateJac dfdx;
  ZetaJac dfdzeta;
};

DynamicsJacobians dynamics_jacobians(const StateVec& x, const ZetaVec& zeta, const Vec3& gust,
                                     const GtmrParams& params);

/// Constant input Jacobian df/du.
InputJac input_jacobian();

/// Draws each component uniformly in [lower_j, upper_j]; deterministic in the seed.
UncertaintyVector sample_uncertainty(const UncertaintyBounds& bounds, std::uint64_t rng_seed);

}  // namespace helixguard
