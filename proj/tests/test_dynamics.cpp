#include <cmath>
#include <stdexcept>

#include <doctest.h>

#include "marltwin/dynamics.hpp"
#include "marltwin/geom.hpp"
#include "marltwin/rng.hpp"

using namespace marltwin;

TEST_CASE("zero input is a fixed point") {
  VehicleState s;
  const VehicleState next = step_vehicle(s, 0.0, 0.0, VehicleParams{}, 0.02);
  CHECK(next.x_m == 0.0);
  CHECK(next.y_m == 0.0);
  CHECK(next.yaw_rad == 0.0);
  CHECK(next.speed_mps == 0.0);
}

TEST_CASE("steady state when drive balances drag") {
  VehicleParams p;
  VehicleState s;
  s.speed_mps = 1.0;
  // Pick the throttle whose drive acceleration equals drag * v.
  const double accel_per_throttle = p.max_torque_nm / (p.wheel_radius_m * p.mass_kg);
  const double throttle = p.drag_coeff * s.speed_mps / accel_per_throttle;
  REQUIRE(throttle > 0.0);
  REQUIRE(throttle < 1.0);
  const VehicleState next = step_vehicle(s, throttle, 0.0, p, 0.02);
  CHECK(next.x_m == doctest::Approx(0.02).epsilon(1e-12));
  CHECK(next.speed_mps == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(next.y_m == 0.0);
  CHECK(next.yaw_rad == 0.0);
}

TEST_CASE("full steer yaw rate matches the bicycle formula") {
  VehicleParams p;
  p.max_steer_rad = 0.5236;
  p.wheelbase_m = 0.3;
  VehicleState s;
  s.speed_mps = 1.0;
  const double dt = 0.02;
  const VehicleState next = step_vehicle(s, 0.0, 1.0, p, dt);
  const double yaw_rate = (next.yaw_rad - s.yaw_rad) / dt;
  // tan(0.5236) / 0.3, evaluated by hand.
  CHECK(yaw_rate == doctest::Approx(1.9245).epsilon(1e-4));
}

TEST_CASE("determinism: identical inputs give bitwise-identical outputs") {
  VehicleParams p;
  Rng rng(7);
  for (int i = 0; i < 200; ++i) {
    VehicleState s{rng.uniform(-5, 5), rng.uniform(-5, 5), rng.uniform(-3, 3), rng.uniform(0, 3)};
    s.yaw_rad = wrap_angle(s.yaw_rad);
    const double throttle = rng.uniform();
    const double steer = rng.uniform(-1, 1);
    const VehicleState a = step_vehicle(s, throttle, steer, p, 0.02);
    const VehicleState b = step_vehicle(s, throttle, steer, p, 0.02);
    CHECK(a.x_m == b.x_m);
    CHECK(a.y_m == b.y_m);
    CHECK(a.yaw_rad == b.yaw_rad);
    CHECK(a.speed_mps == b.speed_mps);
  }
}

TEST_CASE("straight-line consistency") {
  VehicleParams p;
  VehicleState s;
  s.speed_mps = 0.5;
  for (int i = 0; i < 500; ++i) {
    s = step_vehicle(s, 1.0, 0.0, p, 0.02);
    CHECK(s.yaw_rad == 0.0);
    CHECK(s.y_m == 0.0);
  }
  CHECK(s.x_m > 0.0);
}

TEST_CASE("friction clamps longitudinal acceleration") {
  VehicleParams p;
  Rng rng(13);
  const double dt = 0.02;
  for (int i = 0; i < 2000; ++i) {
    VehicleState s;
    s.speed_mps = rng.uniform(0, 6);
    const double throttle = rng.uniform();
    const VehicleState next = step_vehicle(s, throttle, 0.0, p, dt);
    const double accel = (next.speed_mps - s.speed_mps) / dt;
    CHECK(std::abs(accel) <= p.surface_friction * kGravity + 1e-9);
  }
}

TEST_CASE("yaw rate magnitude is non-decreasing in steer magnitude") {
  VehicleParams p;
  VehicleState s;
  s.speed_mps = 1.5;
  double prev = -1.0;
  for (double steer = 0.0; steer <= 1.0 + 1e-12; steer += 0.05) {
    const VehicleState next = step_vehicle(s, 0.5, steer, p, 0.02);
    const double rate = std::abs(next.yaw_rad - s.yaw_rad);
    CHECK(rate >= prev - 1e-15);
    prev = rate;
  }
}

TEST_CASE("speed never goes negative") {
  VehicleParams p;
  VehicleState s;
  s.speed_mps = 0.01;
  for (int i = 0; i < 100; ++i) {
    s = step_vehicle(s, 0.0, 0.0, p, 0.02);
    CHECK(s.speed_mps >= 0.0);
  }
  CHECK(s.speed_mps == 0.0);
}

TEST_CASE("max dynamics offsets visibly change a 100-step trajectory") {
  const VehicleParams nominal;
  auto run = [](const VehicleParams& p) {
    VehicleState s;
    for (int i = 0; i < 100; ++i) s = step_vehicle(s, 1.0, 0.3, p, 0.02);
    return s;
  };
  const VehicleState base = run(nominal);

  auto displaced = [&](const VehicleParams& p) {
    const VehicleState v = run(p);
    return std::hypot(v.x_m - base.x_m, v.y_m - base.y_m);
  };

  VehicleParams cg = nominal;
  cg.cg_offset_m = {0.1, 0.1, 0.1};
  CHECK(displaced(cg) > 0.0);

  VehicleParams susp = nominal;
  susp.suspension_stiffness_npm += 200.0;
  CHECK(displaced(susp) > 0.0);

  VehicleParams tire = nominal;
  tire.cornering_stiffness_nprad += 5.0;
  CHECK(displaced(tire) > 0.0);

  VehicleParams friction = nominal;
  friction.surface_friction += 0.2;
  CHECK(displaced(friction) > 0.0);
  friction.surface_friction = nominal.surface_friction - 0.2;
  CHECK(displaced(friction) > 0.0);
}

TEST_CASE("drive degradation stays within [0.8, 1]") {
  VehicleParams p;
  CHECK(p.drive_degradation() == 1.0);
  p.cg_offset_m = {0.1, 0.1, 0.1};
  p.suspension_stiffness_npm += 200.0;
  p.cornering_stiffness_nprad += 5.0;
  CHECK(p.drive_degradation() == doctest::Approx(0.8));
  p.cg_offset_m = {10.0, 10.0, 10.0};  // beyond any grid: still floored at 0.8
  CHECK(p.drive_degradation() >= 0.8);
}

TEST_CASE("non-finite inputs are rejected with the field name") {
  VehicleParams p;
  VehicleState s;
  s.x_m = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_WITH_AS(step_vehicle(s, 0.0, 0.0, p, 0.02),
                       doctest::Contains("x_m"), std::invalid_argument);
  s = VehicleState{};
  CHECK_THROWS_AS(step_vehicle(s, std::numeric_limits<double>::infinity(), 0.0, p, 0.02),
                  std::invalid_argument);
  CHECK_THROWS_AS(step_vehicle(s, 0.0, 0.0, p, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(step_vehicle(s, 0.0, 0.0, p, 0.2), std::invalid_argument);
}

TEST_CASE("decode_action maps the discrete sets") {
  CHECK(decode_action(1, 1, Scenario::kCoop) == std::pair{1.0, 0.0});
  CHECK(decode_action(0, 0, Scenario::kRace) == std::pair{0.1, -1.0});
  CHECK(decode_action(0, 1, Scenario::kCoop) == std::pair{0.5, 0.0});
  CHECK(decode_action(2, 2, Scenario::kRace) == std::pair{1.0, 1.0});
  CHECK(decode_action(0, 2, Scenario::kCoop).second == 1.0);
  CHECK_THROWS_AS(decode_action(2, 0, Scenario::kCoop), std::out_of_range);
  CHECK_THROWS_AS(decode_action(3, 0, Scenario::kRace), std::out_of_range);
  CHECK_THROWS_AS(decode_action(0, 3, Scenario::kRace), std::out_of_range);
  CHECK_THROWS_AS(decode_action(0, -1, Scenario::kCoop), std::out_of_range);
}

TEST_CASE("angle wrap") {
  CHECK(wrap_angle(-6.0) == doctest::Approx(0.2832).epsilon(1e-3));
  CHECK(wrap_angle(std::numbers::pi) == doctest::Approx(std::numbers::pi));
  CHECK(wrap_angle(-std::numbers::pi) == doctest::Approx(std::numbers::pi));
  CHECK(wrap_angle(0.0) == 0.0);
  Rng rng(3);
  for (int i = 0; i < 1000; ++i) {
    const double w = wrap_angle(rng.uniform(-50, 50));
    CHECK(w > -std::numbers::pi);
    CHECK(w <= std::numbers::pi);
  }
}
