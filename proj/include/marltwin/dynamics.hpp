#pragma once

#include <array>
#include <string>
#include <utility>

namespace marltwin {

enum class Scenario { kCoop, kRace };

std::string to_string(Scenario s);
Scenario scenario_from_string(const std::string& s);

/// Physical parameters of one Ackermann-steered vehicle. The stiffness and
/// center-of-mass fields have no direct kinematic analogue; their deviation
/// from the nominal values degrades the drive force (see drive_degradation),
/// so perturbing any of them has a mechanical effect on trajectories.
struct VehicleParams {
  double wheelbase_m = 0.3;
  double mass_kg = 107.0;
  double max_torque_nm = 85.6;
  double wheel_radius_m = 0.08;
  double max_steer_rad = 0.5235987755982988;  // 30 deg
  double drag_coeff = 2.5;                    // longitudinal velocity damping [1/s]
  std::array<double, 3> cg_offset_m{0.0, 0.0, 0.0};
  double suspension_stiffness_npm = 5000.0;
  double cornering_stiffness_nprad = 25.0;
  double surface_friction = 0.8;

  // Baselines against which randomization offsets are measured.
  double suspension_nominal_npm = 5000.0;
  double cornering_nominal_nprad = 25.0;

  /// Drive-force degradation factor in [0.8, 1.0], a smooth function of how
  /// far the cg/suspension/tire parameters sit from nominal relative to the
  /// largest offsets the randomization grids can produce.
  double drive_degradation() const;

  /// Throws std::invalid_argument naming the offending field.
  void validate() const;
};

struct VehicleState {
  double x_m = 0.0;
  double y_m = 0.0;
  double yaw_rad = 0.0;   // wrapped to (-pi, pi]
  double speed_mps = 0.0; // forward only, >= 0

  void validate(const char* who) const;
};

inline constexpr double kGravity = 9.81;

// Largest offsets the highest randomization degree can apply; used to
// normalize the drive_degradation input.
inline constexpr double kCgOffsetCap = 0.1;          // m per axis
inline constexpr double kSuspensionOffsetCap = 200.0; // N/m
inline constexpr double kCorneringOffsetCap = 5.0;    // N/rad

/// One discrete-time step of the kinematic bicycle with torque- and
/// friction-limited longitudinal dynamics. Pure function; bitwise
/// deterministic in its inputs.
///
/// accel  = clamp(min(throttle*T/(r*m), mu*g) * f_dyn - drag*v, -mu*g, mu*g)
/// pose   advances with the pre-step speed and yaw
/// yaw    advances by v*tan(steer*max_steer)/wheelbase * dt
/// speed' = max(0, v + accel*dt)
VehicleState step_vehicle(const VehicleState& state, double throttle_norm,
                          double steer_norm, const VehicleParams& params, double dt);

/// Maps discrete action indices to normalized commands.
/// Cooperative throttle set {0.5, 1.0}; competitive {0.1, 0.5, 1.0};
/// steering set {-1, 0, +1} in both (nominally left/straight/right).
std::pair<double, double> decode_action(int throttle_index, int steer_index,
                                        Scenario scenario);

int throttle_cardinality(Scenario scenario);
inline constexpr int kSteerCardinality = 3;

}  // namespace marltwin
