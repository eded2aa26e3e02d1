/**
 * @file geometry.hpp
 * @brief Tower clearance functions and the helical inspection reference.
 */
#pragma once

#include "helixguard/model.hpp"

#include <numbers>
#include <stdexcept>

namespace helixguard {

/// Thrown when a clearance quantity is requested on the tower axis.
class DegenerateAxisError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Horizontal radius below which the clearance gradient is undefined.
inline constexpr double kAxisTolerance = 1e-9;

/// Vertical cylinder along the inertial z-axis.
struct TowerGeometry {
  double radius = 1.0;  // m
  double d_min = 0.20;  // m
  double d_ref = 0.35;  // m

  void validate() const;
};

/// Helix p(t) = [rho cos(Omega t + phi0), rho sin(Omega t + phi0), z0 + vz t].
struct HelixSpec {
  double orbit_radius = 1.35;                         // m
  double angular_rate = 2.0 * std::numbers::pi / 25;  // rad/s
  double climb_rate = 0.05;                           // m/s
  double initial_altitude = 1.0;                      // m
  double initial_phase = 0.0;                         // rad

  /// Helix on the preferred offset surface of `tower` with the default rates.
  static HelixSpec for_tower(const TowerGeometry& tower);
  void validate(const TowerGeometry& tower) const;
};

struct ReferencePoint {
  Vec3 position = Vec3::Zero();
  Vec3 velocity = Vec3::Zero();
  Vec3 acceleration = Vec3::Zero();
};

/// rho(p) - R. Negative inside the tower.
double tower_distance(const Vec3& p, const TowerGeometry& geom);

/// s = d_min - d_T(p); the clearance requirement holds iff s <= 0.
double clearance_residual(const Vec3& p, const TowerGeometry& geom);

ReferencePoint helix_reference(double t, const HelixSpec& helix);

/// Tower-facing heading along the helix.
double reference_yaw(double t, const HelixSpec& helix);

}  // namespace helixguard
