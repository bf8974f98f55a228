#include "marltwin/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "marltwin/geom.hpp"

namespace marltwin {

namespace {

void require_finite(double v, const char* field) {
  if (!std::isfinite(v)) {
    throw std::invalid_argument(std::string("step_vehicle: ") + field + " is not finite");
  }
}

}  // namespace

std::string to_string(Scenario s) { return s == Scenario::kCoop ? "coop" : "race"; }

Scenario scenario_from_string(const std::string& s) {
  if (s == "coop") return Scenario::kCoop;
  if (s == "race") return Scenario::kRace;
  throw std::invalid_argument("unknown scenario '" + s + "' (expected coop|race)");
}

double VehicleParams::drive_degradation() const {
  const double sx = cg_offset_m[0] / kCgOffsetCap;
  const double sy = cg_offset_m[1] / kCgOffsetCap;
  const double sz = cg_offset_m[2] / kCgOffsetCap;
  const double sk = (suspension_stiffness_npm - suspension_nominal_npm) / kSuspensionOffsetCap;
  const double sc = (cornering_stiffness_nprad - cornering_nominal_nprad) / kCorneringOffsetCap;
  const double n = std::sqrt(sx * sx + sy * sy + sz * sz + sk * sk + sc * sc);
  const double max_n = std::sqrt(5.0);
  return 1.0 - 0.2 * std::min(1.0, n / max_n);
}

void VehicleParams::validate() const {
  auto positive = [](double v, const char* field) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw std::invalid_argument(std::string("VehicleParams: ") + field + " must be positive and finite");
    }
  };
  positive(wheelbase_m, "wheelbase_m");
  positive(mass_kg, "mass_kg");
  positive(wheel_radius_m, "wheel_radius_m");
  positive(max_torque_nm, "max_torque_nm");
  positive(surface_friction, "surface_friction");
  if (!(max_steer_rad > 0.0) || !(max_steer_rad < std::numbers::pi / 2.0)) {
    throw std::invalid_argument("VehicleParams: max_steer_rad must lie in (0, pi/2)");
  }
  if (!(drag_coeff >= 0.0) || !std::isfinite(drag_coeff)) {
    throw std::invalid_argument("VehicleParams: drag_coeff must be non-negative and finite");
  }
  for (double c : cg_offset_m) {
    if (!std::isfinite(c)) throw std::invalid_argument("VehicleParams: cg_offset_m is not finite");
  }
}

void VehicleState::validate(const char* who) const {
  auto finite = [who](double v, const char* field) {
    if (!std::isfinite(v)) {
      throw std::invalid_argument(std::string(who) + ": " + field + " is not finite");
    }
  };
  finite(x_m, "x_m");
  finite(y_m, "y_m");
  finite(yaw_rad, "yaw_rad");
  finite(speed_mps, "speed_mps");
}

VehicleState step_vehicle(const VehicleState& state, double throttle_norm,
                          double steer_norm, const VehicleParams& params, double dt) {
  state.validate("step_vehicle: state");
  require_finite(throttle_norm, "throttle_norm");
  require_finite(steer_norm, "steer_norm");
  params.validate();
  if (!(dt > 0.0) || !(dt <= 0.1)) {
    throw std::invalid_argument("step_vehicle: dt must lie in (0, 0.1]");
  }

  const double v = state.speed_mps;
  const double friction_limit = params.surface_friction * kGravity;
  const double drive =
      std::min(throttle_norm * params.max_torque_nm / (params.wheel_radius_m * params.mass_kg),
               friction_limit) *
      params.drive_degradation();
  const double accel = std::clamp(drive - params.drag_coeff * v, -friction_limit, friction_limit);
  const double yaw_rate = v * std::tan(steer_norm * params.max_steer_rad) / params.wheelbase_m;

  VehicleState next;
  next.x_m = state.x_m + v * std::cos(state.yaw_rad) * dt;
  next.y_m = state.y_m + v * std::sin(state.yaw_rad) * dt;
  next.yaw_rad = wrap_angle(state.yaw_rad + yaw_rate * dt);
  next.speed_mps = std::max(0.0, v + accel * dt);
  return next;
}

std::pair<double, double> decode_action(int throttle_index, int steer_index,
                                        Scenario scenario) {
  static constexpr double kCoopThrottle[] = {0.5, 1.0};
  static constexpr double kRaceThrottle[] = {0.1, 0.5, 1.0};
  static constexpr double kSteer[] = {-1.0, 0.0, 1.0};

  const int t_card = throttle_cardinality(scenario);
  if (throttle_index < 0 || throttle_index >= t_card) {
    throw std::out_of_range("decode_action: throttle_index " + std::to_string(throttle_index) +
                            " out of range [0, " + std::to_string(t_card) + ")");
  }
  if (steer_index < 0 || steer_index >= kSteerCardinality) {
    throw std::out_of_range("decode_action: steer_index " + std::to_string(steer_index) +
                            " out of range [0, 3)");
  }
  const double throttle =
      scenario == Scenario::kCoop ? kCoopThrottle[throttle_index] : kRaceThrottle[throttle_index];
  return {throttle, kSteer[steer_index]};
}

int throttle_cardinality(Scenario scenario) { return scenario == Scenario::kCoop ? 2 : 3; }

}  // namespace marltwin
