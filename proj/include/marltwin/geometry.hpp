#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "marltwin/dynamics.hpp"
#include "marltwin/geom.hpp"
#include "marltwin/rng.hpp"

namespace marltwin {

/// Oriented-rectangle collision body, given as half extents.
struct Footprint {
  double half_length_m = 0.15;
  double half_width_m = 0.07;

  void validate() const;
};

struct Polyline {
  std::vector<Vec2> points;
  bool closed = false;
};

/// One checkpoint gate: a segment from a to b plus the unit direction of
/// forward travel through it.
struct Gate {
  Vec2 a;
  Vec2 b;
  Vec2 forward;
};

/// Axis-aligned rectangle (goal regions).
struct Rect {
  Vec2 min;
  Vec2 max;

  bool contains(const Vec2& p) const {
    return p.x >= min.x && p.x <= max.x && p.y >= min.y && p.y <= max.y;
  }
  Vec2 center() const { return {(min.x + max.x) * 0.5, (min.y + max.y) * 0.5}; }
};

/// Spawn distribution for one agent slot: one anchor pose is drawn uniformly,
/// then jittered along / across the heading and in yaw (all uniform).
struct SpawnDistribution {
  std::vector<Pose2> anchors;
  double along_jitter_m = 0.0;
  double lateral_jitter_m = 0.0;
  double yaw_jitter_rad = 0.0;

  Pose2 sample(Rng& rng) const;
};

struct PeerBody {
  VehicleState state;
  Footprint footprint;
  int agent_id = -1;
};

struct CollisionReport {
  enum class Kind { kNone, kBoundary, kAgent };
  Kind kind = Kind::kNone;
  int agent_id = -1;

  bool any() const { return kind != Kind::kNone; }
};

struct CheckpointResult {
  bool crossed = false;
  bool lap_completed = false;
  int new_index = 0;
};

inline constexpr int kRaceCheckpointCount = 19;
inline constexpr int kLidarBeamCount = 27;
inline constexpr double kLidarFovRad = 4.71238898038469;  // 270 deg
inline constexpr double kLidarMaxRangeM = 10.0;

/// Static world description for either scenario. Immutable after load; all
/// queries are read-only and safe to call concurrently.
class WorldGeometry {
 public:
  int version = 1;
  Scenario scenario = Scenario::kCoop;
  std::vector<Polyline> boundaries;
  std::vector<std::vector<Rect>> goal_regions;  // per agent slot, one drawn per episode
  std::vector<Gate> checkpoints;                // 19 gates, race only
  std::vector<SpawnDistribution> spawns;        // per agent slot
  // Beam bearing spacing: true -> fov/(n-1) with both endpoints included
  // (default); false -> fov/n with the +fov/2 endpoint left open.
  bool lidar_endpoints_inclusive = true;

  /// Validates every structural invariant; throws std::invalid_argument with
  /// an element-level path (e.g. "boundaries[2].points[5]") on failure.
  void validate() const;

  /// Call after mutating boundaries to refresh the flattened segment cache.
  void finalize();

  int agent_slots() const { return static_cast<int>(spawns.size()); }

  struct Segment {
    Vec2 a;
    Vec2 b;
    Vec2 mid;
    double half_len = 0.0;
  };
  const std::vector<Segment>& segments() const { return segments_; }

  std::string to_json_text() const;
  static WorldGeometry from_json_text(const std::string& text);
  static WorldGeometry load(const std::string& path);
  void save(const std::string& path) const;

 private:
  std::vector<Segment> segments_;
};

/// Casts beam_count rays spanning [-fov/2, +fov/2] around the pose heading
/// (index 0 at -fov/2) against boundaries and the given peer rectangles.
/// Returns one range per beam in (0, max_range]; no hit reports max_range.
/// Callers filter peers by perception mask before the call.
std::vector<double> raycast(const Pose2& pose, const WorldGeometry& geometry,
                            std::span<const PeerBody> peers, int beam_count,
                            double fov_rad, double max_range_m);

/// Exact oriented-rectangle collision test against boundary segments and peer
/// rectangles (separating axis). Reports the first contact with deterministic
/// priority: boundary first, then the lowest peer agent id.
CollisionReport check_collision(const VehicleState& ego, const Footprint& footprint,
                                const WorldGeometry& geometry,
                                std::span<const PeerBody> peers);

/// Advances the next-checkpoint index when the motion segment from prev_pose
/// to new_pose crosses gate next_checkpoint_index in the forward direction.
/// Only the next gate counts, so gates cannot be skipped; crossing the last
/// gate wraps to 0 and reports a completed lap.
CheckpointResult checkpoint_progress(const Pose2& prev_pose, const Pose2& new_pose,
                                     const WorldGeometry& geometry,
                                     int next_checkpoint_index);

bool segments_intersect(const Vec2& p1, const Vec2& p2, const Vec2& q1, const Vec2& q2);

/// Corners of an oriented rectangle at the given state.
std::array<Vec2, 4> footprint_corners(const VehicleState& state, const Footprint& fp);

bool rects_overlap(const std::array<Vec2, 4>& a, const std::array<Vec2, 4>& b);
bool rect_intersects_segment(const std::array<Vec2, 4>& corners, const Vec2& a, const Vec2& b);

// ---- Default maps ------------------------------------------------------

struct IntersectionConfig {
  int agents = 4;
  double lane_width_m = 0.25;
  int lanes_per_direction = 2;
  double arm_length_m = 3.0;
  // Spawn band along the inbound lane, measured from the junction center.
  double spawn_near_m = 2.5;
  double spawn_far_m = 3.25;
  double spawn_lateral_jitter_m = 0.05;
  double spawn_yaw_jitter_rad = 0.0872664625997165;  // 5 deg
  // Goal band along the destination arm, measured from the junction center.
  double goal_near_m = 2.25;
  double goal_far_m = 3.25;
};

struct RaceTrackConfig {
  double straight_length_m = 8.0;
  double loop_radius_m = 3.0;
  double half_width_m = 0.9;
  double chicane_depth_m = 1.0;
  double chicane_length_m = 4.0;
  int centerline_samples = 420;
  int agents = 2;
  double spawn_lateral_offset_m = 0.35;
  double spawn_gap_m = 0.55;
  double spawn_lateral_jitter_m = 0.05;
  double spawn_yaw_jitter_rad = 0.0523598775598299;  // 3 deg
};

/// 2+2 lane, 4-way junction of two perpendicular roads. Each agent slot
/// spawns inbound on its own arm and owns one goal region per reachable
/// destination arm (straight, right, left), drawn at reset.
WorldGeometry make_intersection(const IntersectionConfig& cfg = {});

/// Closed loop (oval with one chicane) with 19 equally spaced checkpoint
/// gates; two staggered spawn slots just behind gate 0.
WorldGeometry make_race_track(const RaceTrackConfig& cfg = {});

}  // namespace marltwin
