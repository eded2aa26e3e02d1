#include "helixguard/geometry.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace helixguard;

TEST_CASE("tower distance at reference, surface and diagonal points") {
  const TowerGeometry tower;
  CHECK(tower_distance(Vec3(1.35, 0, 5), tower) == doctest::Approx(0.35).epsilon(1e-15));
  CHECK(tower_distance(Vec3(1.0, 0, 0), tower) == 0.0);
  CHECK(std::abs(tower_distance(Vec3(0.6, 0.8, 2), tower)) < 1e-15);
  CHECK(tower_distance(Vec3(0.5, 0, 0), tower) == doctest::Approx(-0.5));
}

TEST_CASE("tower distance is undefined on the axis") {
  const TowerGeometry tower;
  CHECK_THROWS_AS(tower_distance(Vec3(0, 0, 3), tower), DegenerateAxisError);
  CHECK_THROWS_AS(clearance_residual(Vec3(1e-10, 0, 0), tower), DegenerateAxisError);
}

TEST_CASE("clearance residual sign convention") {
  const TowerGeometry tower;
  CHECK(clearance_residual(Vec3(1.35, 0, 0), tower) == doctest::Approx(-0.15).epsilon(1e-14));
  CHECK(std::abs(clearance_residual(Vec3(0, 1.2, 0), tower)) < 1e-15);
  CHECK(clearance_residual(Vec3(1.182, 0, 0), tower) == doctest::Approx(0.018).epsilon(1e-12));
}

TEST_CASE("geometry validation") {
  TowerGeometry tower;
  CHECK_NOTHROW(tower.validate());
  tower.d_min = 0.4;
  CHECK_THROWS_AS(tower.validate(), std::invalid_argument);
  tower = TowerGeometry{};
  HelixSpec helix = HelixSpec::for_tower(tower);
  CHECK(helix.orbit_radius == doctest::Approx(1.35));
  helix.angular_rate = 0.0;
  CHECK_THROWS_AS(helix.validate(tower), std::invalid_argument);
  helix = HelixSpec::for_tower(tower);
  helix.orbit_radius = 1.1;
  CHECK_THROWS_AS(helix.validate(tower), std::invalid_argument);
}

TEST_CASE("helix reference: start point, offset and periodicity") {
  const TowerGeometry tower;
  const HelixSpec helix = HelixSpec::for_tower(tower);
  const ReferencePoint r0 = helix_reference(0.0, helix);
  CHECK((r0.position - Vec3(1.35, 0, helix.initial_altitude)).norm() < 1e-15);
  const double omega = 2.0 * std::numbers::pi / 25.0;
  CHECK(r0.velocity.norm() == doctest::Approx(std::hypot(1.35 * omega, 0.05)).epsilon(1e-14));

  for (double t = 0.0; t <= 50.0; t += 0.37) {
    CHECK(std::abs(tower_distance(helix_reference(t, helix).position, tower) - 0.35) < 1e-12);
  }
  const double period = 2.0 * std::numbers::pi / helix.angular_rate;
  const ReferencePoint r1 = helix_reference(period, helix);
  CHECK((r1.position.head<2>() - r0.position.head<2>()).norm() < 1e-12);
  CHECK(r1.position.z() - r0.position.z() == doctest::Approx(0.05 * period).epsilon(1e-12));
}

TEST_CASE("helix reference: analytic derivatives") {
  const HelixSpec helix = HelixSpec::for_tower(TowerGeometry{});
  const double omega = helix.angular_rate;
  for (double t : {0.0, 3.1, 17.9, 42.0}) {
    const ReferencePoint r = helix_reference(t, helix);
    const Vec3 centripetal(-omega * omega * r.position.x(), -omega * omega * r.position.y(), 0.0);
    CHECK((r.acceleration - centripetal).norm() < 1e-14);

    double previous = 0.0;
    for (double h : {1e-2, 5e-3}) {
      const Vec3 fd = (helix_reference(t + h, helix).position - helix_reference(t - h, helix).position) / (2 * h);
      const double err = (fd - r.velocity).norm();
      if (previous > 0.0) {
        CHECK(previous / err == doctest::Approx(4.0).epsilon(0.01));  // O(h^2)
      }
      previous = err;
    }
  }
}

TEST_CASE("reference yaw faces the tower") {
  const HelixSpec helix = HelixSpec::for_tower(TowerGeometry{});
  for (double t : {0.0, 6.0, 13.0}) {
    const ReferencePoint r = helix_reference(t, helix);
    const double yaw = reference_yaw(t, helix);
    const Vec3 heading(std::cos(yaw), std::sin(yaw), 0.0);
    const Vec3 to_axis = Vec3(-r.position.x(), -r.position.y(), 0.0).normalized();
    CHECK(heading.dot(to_axis) == doctest::Approx(1.0).epsilon(1e-12));
  }
}
