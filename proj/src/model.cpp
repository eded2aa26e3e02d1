#include "helixguard/model.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <random>
#include <string>

namespace helixguard {

namespace {

// cos/sin of the arm azimuths i * 60 deg.
constexpr std::array<double, kRotors> kArmCos{1.0, 0.5, -0.5, -1.0, -0.5, 0.5};
constexpr std::array<double, kRotors> kArmSin{0.0,
                                              0.86602540378443864676,
                                              0.86602540378443864676,
                                              0.0,
                                              -0.86602540378443864676,
                                              -0.86602540378443864676};

void require(bool ok, const char* what) {
  if (!ok) {
    throw std::invalid_argument(what);
  }
}

Mat3 skew(const Vec3& a) {
  Mat3 s;
  s << 0.0, -a.z(), a.y(), a.z(), 0.0, -a.x(), -a.y(), a.x(), 0.0;
  return s;
}

struct EulerTrig {
  double cr, sr, cp, sp, cy, sy;
  explicit EulerTrig(const Vec3& e)
      : cr(std::cos(e.x())), sr(std::sin(e.x())), cp(std::cos(e.y())), sp(std::sin(e.y())),
        cy(std::cos(e.z())), sy(std::sin(e.z())) {}
};

Mat3 rotation(const EulerTrig& t) {
  Mat3 r;
  r << t.cy * t.cp, t.cy * t.sp * t.sr - t.sy * t.cr, t.cy * t.sp * t.cr + t.sy * t.sr,  //
      t.sy * t.cp, t.sy * t.sp * t.sr + t.cy * t.cr, t.sy * t.sp * t.cr - t.cy * t.sr,   //
      -t.sp, t.cp * t.sr, t.cp * t.cr;
  return r;
}

// Maps body rates to ZYX Euler-angle rates.
Mat3 euler_rate_matrix(const EulerTrig& t) {
  const double tp = t.sp / t.cp;
  Mat3 e;
  e << 1.0, t.sr * tp, t.cr * tp,  //
      0.0, t.cr, -t.sr,            //
      0.0, t.sr / t.cp, t.cr / t.cp;
  return e;
}

void check_pitch(const StateVec& x) {
  if (!(std::abs(x[idx::kEuler + 1]) < kGimbalLockLimit)) {
    throw GimbalLockError("pitch " + std::to_string(x[idx::kEuler + 1]) +
                          " rad is at or beyond the Euler singularity guard");
  }
}

// Quantities shared by the dynamics and its Jacobians.
struct Wrench {
  Vec3 force;   // body frame
  Vec3 torque;  // body frame
  Eigen::Matrix<double, kRotors, 1> thrust;
};

Wrench rotor_wrench(const StateVec& x, double thrust_scale, const AllocationMatrix& alloc,
                    const GtmrParams& params) {
  Wrench w;
  const auto xi = x.segment<kRotors>(idx::kRotor);
  w.thrust = thrust_scale * params.c_f * xi.cwiseProduct(xi);
  const Eigen::Matrix<double, 6, 1> wrench = alloc * w.thrust;
  w.force = wrench.head<3>();
  w.torque = wrench.tail<3>();
  return w;
}

}  // namespace

void GtmrParams::validate() const {
  require(n_rotors == kRotors, "n_rotors must be 6");
  require(mass > 0.0, "mass must be positive");
  require((inertia_diag.array() > 0.0).all(), "inertia components must be positive");
  require(c_f > 0.0, "c_f must be positive");
  require(c_t > 0.0, "c_t must be positive");
  require(arm_length > 0.0, "arm_length must be positive");
  require(rotor_speed_min >= 0.0 && rotor_speed_min < rotor_speed_max,
          "rotor speed limits must satisfy 0 <= min < max");
  require(rotor_rate_max > 0.0, "rotor_rate_max must be positive");
  require(tilt_angle > 0.0 && tilt_angle < std::numbers::pi / 2.0,
          "tilt_angle must lie in (0, pi/2)");
  require(gravity > 0.0, "gravity must be positive");
  require(drag_coeff_nominal >= 0.0, "drag coefficient must be non-negative");
}

double GtmrParams::hover_rotor_speed() const {
  return std::sqrt(mass * gravity / (kRotors * c_f * std::cos(tilt_angle)));
}

ZetaVec UncertaintyVector::flatten() const {
  ZetaVec z;
  z << delta_m, delta_J, delta_T, delta_D, wind_bias;
  return z;
}

UncertaintyVector UncertaintyVector::unflatten(const ZetaVec& z) {
  UncertaintyVector u;
  u.delta_m = z[zidx::kMass];
  u.delta_J = z.segment<3>(zidx::kInertia);
  u.delta_T = z[zidx::kThrust];
  u.delta_D = z[zidx::kDrag];
  u.wind_bias = z.segment<3>(zidx::kWind);
  return u;
}

UncertaintyBounds UncertaintyBounds::symmetric(const ZetaVec& half_width) {
  UncertaintyBounds b{half_width, -half_width};
  b.validate();
  return b;
}

UncertaintyBounds UncertaintyBounds::table_defaults() {
  ZetaVec w;
  w << 0.10, 0.15, 0.15, 0.20, 0.10, 0.20, 0.8, 0.8, 0.3;
  return symmetric(w);
}

void UncertaintyBounds::validate() const {
  require((upper.array() > 0.0).all(), "uncertainty upper bounds must be positive");
  require((lower + upper).cwiseAbs().maxCoeff() == 0.0, "uncertainty box must be symmetric");
}

StateVec State::flatten() const {
  StateVec x;
  x << position, euler, velocity, body_rates, rotor_speeds;
  return x;
}

State State::unflatten(const StateVec& x) {
  State s;
  s.position = x.segment<3>(idx::kPos);
  s.euler = x.segment<3>(idx::kEuler);
  s.velocity = x.segment<3>(idx::kVel);
  s.body_rates = x.segment<3>(idx::kRates);
  s.rotor_speeds = x.segment<kRotors>(idx::kRotor);
  return s;
}

AllocationMatrix allocation_matrix(const GtmrParams& params) {
  const double ca = std::cos(params.tilt_angle);
  const double sa = std::sin(params.tilt_angle);
  const double kappa = params.c_t / params.c_f;
  AllocationMatrix a;
  for (int i = 0; i < kRotors; ++i) {
    const double sign = (i % 2 == 0) ? 1.0 : -1.0;
    const Vec3 arm(kArmCos[i], kArmSin[i], 0.0);
    // Rodrigues rotation of e_z about the arm axis by sign * alpha.
    const Vec3 axis(kArmSin[i] * sign * sa, -kArmCos[i] * sign * sa, ca);
    a.col(i).head<3>() = axis;
    a.col(i).tail<3>() = params.arm_length * arm.cross(axis) + sign * kappa * axis;
  }
  return a;
}

Mat3 rotation_from_euler(const Vec3& euler) { return rotation(EulerTrig(euler)); }

StateVec dynamics(const StateVec& x, const InputVec& u, const ZetaVec& zeta, const Vec3& gust,
                  const GtmrParams& params) {
  check_pitch(x);
  const double mass = (1.0 + zeta[zidx::kMass]) * params.mass;
  const Vec3 inertia =
      params.inertia_diag.cwiseProduct(Vec3::Ones() + zeta.segment<3>(zidx::kInertia));
  const double drag = (1.0 + zeta[zidx::kDrag]) * params.drag_coeff_nominal;

  const EulerTrig trig(x.segment<3>(idx::kEuler));
  const Vec3 v = x.segment<3>(idx::kVel);
  const Vec3 w = x.segment<3>(idx::kRates);
  const Wrench wr =
      rotor_wrench(x, 1.0 + zeta[zidx::kThrust], allocation_matrix(params), params);

  StateVec dx;
  dx.segment<3>(idx::kPos) = v;
  dx.segment<3>(idx::kEuler) = euler_rate_matrix(trig) * w;
  dx.segment<3>(idx::kVel) =
      (rotation(trig) * wr.force - drag * v + zeta.segment<3>(zidx::kWind) + gust) / mass -
      Vec3(0.0, 0.0, params.gravity);
  const Vec3 jw = inertia.cwiseProduct(w);
  dx.segment<3>(idx::kRates) = (wr.torque - w.cross(jw)).cwiseQuotient(inertia);
  dx.segment<kRotors>(idx::kRotor) = u;
  return dx;
}

DynamicsJacobians dynamics_jacobians(const StateVec& x, const ZetaVec& zeta, const Vec3& gust,
                                     const GtmrParams& params) {
  check_pitch(x);
  const double mass_scale = 1.0 + zeta[zidx::kMass];
  const double mass = mass_scale * params.mass;
  const Vec3 inertia =
      params.inertia_diag.cwiseProduct(Vec3::Ones() + zeta.segment<3>(zidx::kInertia));
  const Vec3 inv_inertia = inertia.cwiseInverse();
  const double thrust_scale = 1.0 + zeta[zidx::kThrust];
  const double drag = (1.0 + zeta[zidx::kDrag]) * params.drag_coeff_nominal;

  const EulerTrig t(x.segment<3>(idx::kEuler));
  const Vec3 v = x.segment<3>(idx::kVel);
  const Vec3 w = x.segment<3>(idx::kRates);
  const AllocationMatrix alloc = allocation_matrix(params);
  const Wrench wr = rotor_wrench(x, thrust_scale, alloc, params);
  const Mat3 rot = rotation(t);

  DynamicsJacobians jac;
  StateJac& fx = jac.dfdx;
  fx.setZero();

  // Position kinematics.
  fx.block<3, 3>(idx::kPos, idx::kVel).setIdentity();

  // Euler kinematics.
  const double cp2 = t.cp * t.cp;
  Mat3 de_droll;
  de_droll << 0.0, t.cr * t.sp / t.cp, -t.sr * t.sp / t.cp,  //
      0.0, -t.sr, -t.cr,                                     //
      0.0, t.cr / t.cp, -t.sr / t.cp;
  Mat3 de_dpitch;
  de_dpitch << 0.0, t.sr / cp2, t.cr / cp2,  //
      0.0, 0.0, 0.0,                         //
      0.0, t.sr * t.sp / cp2, t.cr * t.sp / cp2;
  fx.block<3, 1>(idx::kEuler, idx::kEuler) = de_droll * w;
  fx.block<3, 1>(idx::kEuler, idx::kEuler + 1) = de_dpitch * w;
  fx.block<3, 3>(idx::kEuler, idx::kRates) = euler_rate_matrix(t);

  // Translational dynamics.
  Mat3 drx, dry, drz;
  {
    Mat3 rx, ry, rz, drx_l, dry_l, drz_l;
    rx << 1, 0, 0, 0, t.cr, -t.sr, 0, t.sr, t.cr;
    ry << t.cp, 0, t.sp, 0, 1, 0, -t.sp, 0, t.cp;
    rz << t.cy, -t.sy, 0, t.sy, t.cy, 0, 0, 0, 1;
    drx_l << 0, 0, 0, 0, -t.sr, -t.cr, 0, t.cr, -t.sr;
    dry_l << -t.sp, 0, t.cp, 0, 0, 0, -t.cp, 0, -t.sp;
    drz_l << -t.sy, -t.cy, 0, t.cy, -t.sy, 0, 0, 0, 0;
    drx = rz * ry * drx_l;
    dry = rz * dry_l * rx;
    drz = drz_l * ry * rx;
  }
  fx.block<3, 1>(idx::kVel, idx::kEuler) = drx * wr.force / mass;
  fx.block<3, 1>(idx::kVel, idx::kEuler + 1) = dry * wr.force / mass;
  fx.block<3, 1>(idx::kVel, idx::kEuler + 2) = drz * wr.force / mass;
  fx.block<3, 3>(idx::kVel, idx::kVel) = -(drag / mass) * Mat3::Identity();

  // d(thrust_i)/d(xi_i) = 2 * scale * c_f * xi_i.
  const Eigen::Matrix<double, kRotors, 1> dthrust =
      2.0 * thrust_scale * params.c_f * x.segment<kRotors>(idx::kRotor);
  const Eigen::Matrix<double, 6, kRotors> dwrench = alloc * dthrust.asDiagonal();
  fx.block<3, kRotors>(idx::kVel, idx::kRotor) = rot * dwrench.topRows<3>() / mass;

  // Rotational dynamics: J w_dot = tau - w x (J w).
  const Mat3 jmat = inertia.asDiagonal();
  const Vec3 jw = jmat * w;
  const Vec3 wdot = (wr.torque - w.cross(jw)).cwiseProduct(inv_inertia);
  fx.block<3, 3>(idx::kRates, idx::kRates) =
      inv_inertia.asDiagonal() * (skew(jw) - skew(w) * jmat);
  fx.block<3, kRotors>(idx::kRates, idx::kRotor) =
      inv_inertia.asDiagonal() * dwrench.bottomRows<3>();

  // Uncertainty Jacobian.
  ZetaJac& fz = jac.dfdzeta;
  fz.setZero();
  const Vec3 accel_forces =
      (rot * wr.force - drag * v + zeta.segment<3>(zidx::kWind) + gust) / mass;
  fz.block<3, 1>(idx::kVel, zidx::kMass) = -accel_forces / mass_scale;
  for (int k = 0; k < 3; ++k) {
    // d(w_dot)/d(delta_Jk) = -J^-1 (E_k w_dot + w x (E_k w)), E_k = J0k e_k e_k^T.
    Vec3 ek_wdot = Vec3::Zero();
    Vec3 ek_w = Vec3::Zero();
    ek_wdot[k] = params.inertia_diag[k] * wdot[k];
    ek_w[k] = params.inertia_diag[k] * w[k];
    fz.block<3, 1>(idx::kRates, zidx::kInertia + k) =
        -(ek_wdot + w.cross(ek_w)).cwiseProduct(inv_inertia);
  }
  const Eigen::Matrix<double, kRotors, 1> xi = x.segment<kRotors>(idx::kRotor);
  const Eigen::Matrix<double, 6, 1> unit_wrench = alloc * (params.c_f * xi.cwiseProduct(xi));
  fz.block<3, 1>(idx::kVel, zidx::kThrust) = rot * unit_wrench.head<3>() / mass;
  fz.block<3, 1>(idx::kRates, zidx::kThrust) = unit_wrench.tail<3>().cwiseProduct(inv_inertia);
  fz.block<3, 1>(idx::kVel, zidx::kDrag) = -params.drag_coeff_nominal * v / mass;
  fz.block<3, 3>(idx::kVel, zidx::kWind) = Mat3::Identity() / mass;
  return jac;
}

InputJac input_jacobian() {
  InputJac b = InputJac::Zero();
  b.bottomRows<kRotors>().setIdentity();
  return b;
}

UncertaintyVector sample_uncertainty(const UncertaintyBounds& bounds, std::uint64_t rng_seed) {
  std::seed_seq seq{static_cast<std::uint32_t>(rng_seed & 0xffffffffu),
                    static_cast<std::uint32_t>(rng_seed >> 32), 0x7a657461u};
  std::mt19937_64 gen(seq);
  ZetaVec z;
  for (int j = 0; j < kZetaDim; ++j) {
    std::uniform_real_distribution<double> dist(bounds.lower[j], bounds.upper[j]);
    z[j] = dist(gen);
  }
  return UncertaintyVector::unflatten(z);
}

}  // namespace helixguard
