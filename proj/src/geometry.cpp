#include "helixguard/geometry.hpp"

#include <cmath>

namespace helixguard {

void TowerGeometry::validate() const {
  if (!(radius > 0.0)) {
    throw std::invalid_argument("tower radius must be positive");
  }
  if (!(d_min > 0.0 && d_min < d_ref)) {
    throw std::invalid_argument("clearances must satisfy 0 < d_min < d_ref");
  }
}

HelixSpec HelixSpec::for_tower(const TowerGeometry& tower) {
  HelixSpec h;
  h.orbit_radius = tower.radius + tower.d_ref;
  return h;
}

void HelixSpec::validate(const TowerGeometry& tower) const {
  if (!(orbit_radius > tower.radius + tower.d_min)) {
    throw std::invalid_argument("helix orbit must lie outside the minimum-clearance surface");
  }
  if (angular_rate == 0.0) {
    throw std::invalid_argument("helix angular rate must be non-zero");
  }
}

double tower_distance(const Vec3& p, const TowerGeometry& geom) {
  const double rho = std::hypot(p.x(), p.y());
  if (rho < kAxisTolerance) {
    throw DegenerateAxisError("position lies on the tower axis");
  }
  return rho - geom.radius;
}

double clearance_residual(const Vec3& p, const TowerGeometry& geom) {
  return geom.d_min - tower_distance(p, geom);
}

ReferencePoint helix_reference(double t, const HelixSpec& helix) {
  const double phase = helix.angular_rate * t + helix.initial_phase;
  const double c = std::cos(phase);
  const double s = std::sin(phase);
  const double r = helix.orbit_radius;
  const double w = helix.angular_rate;
  ReferencePoint ref;
  ref.position = Vec3(r * c, r * s, helix.initial_altitude + helix.climb_rate * t);
  ref.velocity = Vec3(-r * w * s, r * w * c, helix.climb_rate);
  ref.acceleration = Vec3(-r * w * w * c, -r * w * w * s, 0.0);
  return ref;
}

double reference_yaw(double t, const HelixSpec& helix) {
  return helix.angular_rate * t + helix.initial_phase + std::numbers::pi;
}

}  // namespace helixguard
