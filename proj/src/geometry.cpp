#include "marltwin/geometry.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace marltwin {

using nlohmann::json;

void Footprint::validate() const {
  if (!(half_length_m > 0.0) || !(half_width_m > 0.0)) {
    throw std::invalid_argument("Footprint: half extents must be positive");
  }
}

Pose2 SpawnDistribution::sample(Rng& rng) const {
  const Pose2& anchor = anchors[anchors.size() == 1 ? 0 : static_cast<size_t>(
                            rng.uniform_int(static_cast<int>(anchors.size())))];
  const double along = rng.uniform(-along_jitter_m, along_jitter_m);
  const double lateral = rng.uniform(-lateral_jitter_m, lateral_jitter_m);
  const double dyaw = rng.uniform(-yaw_jitter_rad, yaw_jitter_rad);
  const Vec2 h = anchor.heading();
  const Vec2 side{-h.y, h.x};
  Pose2 p;
  p.x = anchor.x + h.x * along + side.x * lateral;
  p.y = anchor.y + h.y * along + side.y * lateral;
  p.yaw = wrap_angle(anchor.yaw + dyaw);
  return p;
}

// ---- Low-level predicates ------------------------------------------------

namespace {

bool on_segment(const Vec2& a, const Vec2& b, const Vec2& p) {
  return p.x >= std::min(a.x, b.x) && p.x <= std::max(a.x, b.x) &&
         p.y >= std::min(a.y, b.y) && p.y <= std::max(a.y, b.y);
}

struct Projection {
  double lo, hi;
};

Projection project(std::span<const Vec2> pts, const Vec2& axis) {
  double lo = dot(pts[0], axis);
  double hi = lo;
  for (size_t i = 1; i < pts.size(); ++i) {
    const double v = dot(pts[i], axis);
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  return {lo, hi};
}

bool projections_separated(std::span<const Vec2> a, std::span<const Vec2> b, const Vec2& axis) {
  const Projection pa = project(a, axis);
  const Projection pb = project(b, axis);
  return pa.hi < pb.lo || pb.hi < pa.lo;
}

}  // namespace

bool segments_intersect(const Vec2& p1, const Vec2& p2, const Vec2& q1, const Vec2& q2) {
  const double d1 = cross(q2 - q1, p1 - q1);
  const double d2 = cross(q2 - q1, p2 - q1);
  const double d3 = cross(p2 - p1, q1 - p1);
  const double d4 = cross(p2 - p1, q2 - p1);
  if (((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) &&
      ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0))) {
    return true;
  }
  if (d1 == 0.0 && on_segment(q1, q2, p1)) return true;
  if (d2 == 0.0 && on_segment(q1, q2, p2)) return true;
  if (d3 == 0.0 && on_segment(p1, p2, q1)) return true;
  if (d4 == 0.0 && on_segment(p1, p2, q2)) return true;
  return false;
}

std::array<Vec2, 4> footprint_corners(const VehicleState& state, const Footprint& fp) {
  const Vec2 c{state.x_m, state.y_m};
  const Vec2 u{std::cos(state.yaw_rad), std::sin(state.yaw_rad)};
  const Vec2 v{-u.y, u.x};
  const Vec2 du = u * fp.half_length_m;
  const Vec2 dv = v * fp.half_width_m;
  return {c + du + dv, c + du - dv, c - du - dv, c - du + dv};
}

bool rects_overlap(const std::array<Vec2, 4>& a, const std::array<Vec2, 4>& b) {
  const std::array<Vec2, 4> axes = {
      Vec2{a[1].x - a[0].x, a[1].y - a[0].y}, Vec2{a[3].x - a[0].x, a[3].y - a[0].y},
      Vec2{b[1].x - b[0].x, b[1].y - b[0].y}, Vec2{b[3].x - b[0].x, b[3].y - b[0].y}};
  for (const Vec2& axis : axes) {
    if (projections_separated(a, b, axis)) return false;
  }
  return true;
}

bool rect_intersects_segment(const std::array<Vec2, 4>& corners, const Vec2& a, const Vec2& b) {
  const std::array<Vec2, 2> seg = {a, b};
  const Vec2 d = b - a;
  const std::array<Vec2, 3> axes = {
      Vec2{corners[1].x - corners[0].x, corners[1].y - corners[0].y},
      Vec2{corners[3].x - corners[0].x, corners[3].y - corners[0].y},
      Vec2{-d.y, d.x}};
  for (const Vec2& axis : axes) {
    if (projections_separated(corners, seg, axis)) return false;
  }
  return true;
}

// ---- WorldGeometry -------------------------------------------------------

void WorldGeometry::finalize() {
  segments_.clear();
  for (const Polyline& pl : boundaries) {
    const size_t n = pl.points.size();
    const size_t edges = pl.closed ? n : (n > 0 ? n - 1 : 0);
    for (size_t i = 0; i < edges; ++i) {
      const Vec2& a = pl.points[i];
      const Vec2& b = pl.points[(i + 1) % n];
      Segment s;
      s.a = a;
      s.b = b;
      s.mid = {(a.x + b.x) * 0.5, (a.y + b.y) * 0.5};
      s.half_len = 0.5 * norm(b - a);
      segments_.push_back(s);
    }
  }
}

void WorldGeometry::validate() const {
  for (size_t i = 0; i < boundaries.size(); ++i) {
    const Polyline& pl = boundaries[i];
    if (pl.points.size() < 2) {
      throw std::invalid_argument("boundaries[" + std::to_string(i) + "]: needs at least 2 points");
    }
    const size_t edges = pl.closed ? pl.points.size() : pl.points.size() - 1;
    for (size_t j = 0; j < edges; ++j) {
      const Vec2& a = pl.points[j];
      const Vec2& b = pl.points[(j + 1) % pl.points.size()];
      if (a.x == b.x && a.y == b.y) {
        throw std::invalid_argument("boundaries[" + std::to_string(i) + "].points[" +
                                    std::to_string(j) + "]: zero-length segment");
      }
    }
  }

  if (scenario == Scenario::kRace) {
    if (static_cast<int>(checkpoints.size()) != kRaceCheckpointCount) {
      throw std::invalid_argument("checkpoints: race geometry requires exactly " +
                                  std::to_string(kRaceCheckpointCount) + " gates, got " +
                                  std::to_string(checkpoints.size()));
    }
  }
  for (size_t i = 0; i < checkpoints.size(); ++i) {
    const Gate& g = checkpoints[i];
    if (g.a.x == g.b.x && g.a.y == g.b.y) {
      throw std::invalid_argument("checkpoints[" + std::to_string(i) + "]: zero-length gate");
    }
    if (std::abs(norm(g.forward) - 1.0) > 1e-6) {
      throw std::invalid_argument("checkpoints[" + std::to_string(i) + "]: forward must be a unit vector");
    }
    for (size_t j = i + 1; j < checkpoints.size(); ++j) {
      if (segments_intersect(g.a, g.b, checkpoints[j].a, checkpoints[j].b)) {
        throw std::invalid_argument("checkpoints[" + std::to_string(i) + "] and checkpoints[" +
                                    std::to_string(j) + "] intersect");
      }
    }
  }
  // Gates must be ordered along the direction of travel.
  for (size_t i = 0; i + 1 < checkpoints.size(); ++i) {
    const Vec2 c0 = (checkpoints[i].a + checkpoints[i].b) * 0.5;
    const Vec2 c1 = (checkpoints[i + 1].a + checkpoints[i + 1].b) * 0.5;
    if (dot(checkpoints[i].forward, c1 - c0) <= 0.0) {
      throw std::invalid_argument("checkpoints[" + std::to_string(i) +
                                  "]: next gate does not lie in the forward direction");
    }
  }

  if (!goal_regions.empty() && goal_regions.size() != spawns.size()) {
    throw std::invalid_argument("goal_regions: must list one entry per agent slot");
  }
  for (size_t i = 0; i < goal_regions.size(); ++i) {
    for (size_t j = 0; j < goal_regions[i].size(); ++j) {
      const Rect& r = goal_regions[i][j];
      if (!(r.min.x < r.max.x) || !(r.min.y < r.max.y)) {
        throw std::invalid_argument("goal_regions[" + std::to_string(i) + "][" +
                                    std::to_string(j) + "]: min must lie below max");
      }
    }
  }

  const Footprint default_fp;
  for (size_t i = 0; i < spawns.size(); ++i) {
    if (spawns[i].anchors.empty()) {
      throw std::invalid_argument("spawns[" + std::to_string(i) + "]: needs at least one anchor");
    }
    for (size_t j = 0; j < spawns[i].anchors.size(); ++j) {
      const Pose2& p = spawns[i].anchors[j];
      VehicleState st;
      st.x_m = p.x;
      st.y_m = p.y;
      st.yaw_rad = p.yaw;
      if (check_collision(st, default_fp, *this, {}).any()) {
        throw std::invalid_argument("spawns[" + std::to_string(i) + "].anchors[" +
                                    std::to_string(j) + "]: collides with a boundary");
      }
    }
  }
}

// ---- Queries --------------------------------------------------------------

std::vector<double> raycast(const Pose2& pose, const WorldGeometry& geometry,
                            std::span<const PeerBody> peers, int beam_count,
                            double fov_rad, double max_range_m) {
  if (beam_count < 2) throw std::invalid_argument("raycast: beam_count must be >= 2");
  if (!(fov_rad > 0.0) || fov_rad > 2.0 * std::numbers::pi + 1e-12) {
    throw std::invalid_argument("raycast: fov_rad must lie in (0, 2*pi]");
  }
  if (!(max_range_m > 0.0)) throw std::invalid_argument("raycast: max_range_m must be positive");

  const Vec2 origin = pose.position();
  const double spacing = geometry.lidar_endpoints_inclusive ? fov_rad / (beam_count - 1)
                                                            : fov_rad / beam_count;

  // Gather candidate segments once per scan: boundaries within reach plus
  // peer rectangle edges.
  std::vector<std::pair<Vec2, Vec2>> candidates;
  candidates.reserve(geometry.segments().size() + peers.size() * 4);
  for (const WorldGeometry::Segment& s : geometry.segments()) {
    if (norm(s.mid - origin) - s.half_len <= max_range_m) {
      candidates.emplace_back(s.a, s.b);
    }
  }
  for (const PeerBody& peer : peers) {
    const auto c = footprint_corners(peer.state, peer.footprint);
    for (int e = 0; e < 4; ++e) candidates.emplace_back(c[e], c[(e + 1) % 4]);
  }

  std::vector<double> ranges(static_cast<size_t>(beam_count), max_range_m);
  for (int i = 0; i < beam_count; ++i) {
    const double bearing = -fov_rad / 2.0 + i * spacing;
    const Vec2 d{std::cos(pose.yaw + bearing), std::sin(pose.yaw + bearing)};
    double best = max_range_m;
    for (const auto& [a, b] : candidates) {
      const Vec2 e = b - a;
      const double denom = cross(d, e);
      if (std::abs(denom) < 1e-15) continue;
      const double t = cross(a - origin, e) / denom;
      const double u = cross(a - origin, d) / denom;
      if (t >= 0.0 && t < best && u >= 0.0 && u <= 1.0) best = t;
    }
    ranges[static_cast<size_t>(i)] = std::max(best, 1e-9);
  }
  return ranges;
}

CollisionReport check_collision(const VehicleState& ego, const Footprint& footprint,
                                const WorldGeometry& geometry,
                                std::span<const PeerBody> peers) {
  ego.validate("check_collision: ego");
  const auto ego_rect = footprint_corners(ego, footprint);

  const Vec2 center{ego.x_m, ego.y_m};
  const double reach = std::hypot(footprint.half_length_m, footprint.half_width_m);
  for (const WorldGeometry::Segment& s : geometry.segments()) {
    if (norm(s.mid - center) - s.half_len > reach) continue;
    if (rect_intersects_segment(ego_rect, s.a, s.b)) {
      return {CollisionReport::Kind::kBoundary, -1};
    }
  }

  std::vector<const PeerBody*> sorted;
  sorted.reserve(peers.size());
  for (const PeerBody& p : peers) sorted.push_back(&p);
  std::sort(sorted.begin(), sorted.end(),
            [](const PeerBody* a, const PeerBody* b) { return a->agent_id < b->agent_id; });
  for (const PeerBody* p : sorted) {
    if (rects_overlap(ego_rect, footprint_corners(p->state, p->footprint))) {
      return {CollisionReport::Kind::kAgent, p->agent_id};
    }
  }
  return {};
}

CheckpointResult checkpoint_progress(const Pose2& prev_pose, const Pose2& new_pose,
                                     const WorldGeometry& geometry,
                                     int next_checkpoint_index) {
  const int n = static_cast<int>(geometry.checkpoints.size());
  if (next_checkpoint_index < 0 || next_checkpoint_index >= n) {
    throw std::out_of_range("checkpoint_progress: index " + std::to_string(next_checkpoint_index) +
                            " out of range [0, " + std::to_string(n) + ")");
  }
  const Gate& gate = geometry.checkpoints[static_cast<size_t>(next_checkpoint_index)];
  const Vec2 p0 = prev_pose.position();
  const Vec2 p1 = new_pose.position();

  CheckpointResult result;
  result.new_index = next_checkpoint_index;
  if (!segments_intersect(p0, p1, gate.a, gate.b)) return result;
  if (dot(p1 - p0, gate.forward) <= 0.0) return result;  // backward or tangential

  result.crossed = true;
  result.lap_completed = next_checkpoint_index == n - 1;
  result.new_index = (next_checkpoint_index + 1) % n;
  return result;
}

// ---- JSON ------------------------------------------------------------------

namespace {

json vec_to_json(const Vec2& v) { return json::array({v.x, v.y}); }

Vec2 vec_from_json(const json& j, const std::string& path) {
  if (!j.is_array() || j.size() != 2) {
    throw std::invalid_argument(path + ": expected [x, y]");
  }
  return {j[0].get<double>(), j[1].get<double>()};
}

}  // namespace

std::string WorldGeometry::to_json_text() const {
  json j;
  j["version"] = version;
  j["scenario"] = to_string(scenario);
  j["lidar_endpoints_inclusive"] = lidar_endpoints_inclusive;
  j["boundaries"] = json::array();
  for (const Polyline& pl : boundaries) {
    json p;
    p["closed"] = pl.closed;
    p["points"] = json::array();
    for (const Vec2& v : pl.points) p["points"].push_back(vec_to_json(v));
    j["boundaries"].push_back(std::move(p));
  }
  j["goal_regions"] = json::array();
  for (const auto& per_agent : goal_regions) {
    json arr = json::array();
    for (const Rect& r : per_agent) {
      arr.push_back(json{{"min", vec_to_json(r.min)}, {"max", vec_to_json(r.max)}});
    }
    j["goal_regions"].push_back(std::move(arr));
  }
  j["checkpoints"] = json::array();
  for (const Gate& g : checkpoints) {
    j["checkpoints"].push_back(json{
        {"a", vec_to_json(g.a)}, {"b", vec_to_json(g.b)}, {"forward", vec_to_json(g.forward)}});
  }
  j["spawns"] = json::array();
  for (const SpawnDistribution& s : spawns) {
    json anchors = json::array();
    for (const Pose2& p : s.anchors) anchors.push_back(json::array({p.x, p.y, p.yaw}));
    j["spawns"].push_back(json{{"anchors", std::move(anchors)},
                               {"along_jitter_m", s.along_jitter_m},
                               {"lateral_jitter_m", s.lateral_jitter_m},
                               {"yaw_jitter_rad", s.yaw_jitter_rad}});
  }
  return j.dump(2);
}

WorldGeometry WorldGeometry::from_json_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("geometry: invalid JSON: ") + e.what());
  }
  WorldGeometry g;
  if (!j.contains("version") || !j["version"].is_number_integer()) {
    throw std::invalid_argument("geometry: missing integer field 'version'");
  }
  g.version = j["version"].get<int>();
  if (g.version != 1) {
    throw std::invalid_argument("geometry: unsupported version " + std::to_string(g.version));
  }
  if (!j.contains("scenario")) throw std::invalid_argument("geometry: missing field 'scenario'");
  g.scenario = scenario_from_string(j["scenario"].get<std::string>());
  g.lidar_endpoints_inclusive = j.value("lidar_endpoints_inclusive", true);

  size_t bi = 0;
  for (const json& p : j.value("boundaries", json::array())) {
    Polyline pl;
    pl.closed = p.value("closed", false);
    size_t pi = 0;
    for (const json& v : p.value("points", json::array())) {
      pl.points.push_back(
          vec_from_json(v, "boundaries[" + std::to_string(bi) + "].points[" + std::to_string(pi) + "]"));
      ++pi;
    }
    g.boundaries.push_back(std::move(pl));
    ++bi;
  }
  size_t gi = 0;
  for (const json& per_agent : j.value("goal_regions", json::array())) {
    std::vector<Rect> rects;
    size_t ri = 0;
    for (const json& r : per_agent) {
      const std::string path = "goal_regions[" + std::to_string(gi) + "][" + std::to_string(ri) + "]";
      rects.push_back(Rect{vec_from_json(r.at("min"), path + ".min"),
                           vec_from_json(r.at("max"), path + ".max")});
      ++ri;
    }
    g.goal_regions.push_back(std::move(rects));
    ++gi;
  }
  size_t ci = 0;
  for (const json& c : j.value("checkpoints", json::array())) {
    const std::string path = "checkpoints[" + std::to_string(ci) + "]";
    g.checkpoints.push_back(Gate{vec_from_json(c.at("a"), path + ".a"),
                                 vec_from_json(c.at("b"), path + ".b"),
                                 vec_from_json(c.at("forward"), path + ".forward")});
    ++ci;
  }
  size_t si = 0;
  for (const json& s : j.value("spawns", json::array())) {
    SpawnDistribution d;
    size_t ai = 0;
    for (const json& a : s.value("anchors", json::array())) {
      if (!a.is_array() || a.size() != 3) {
        throw std::invalid_argument("spawns[" + std::to_string(si) + "].anchors[" +
                                    std::to_string(ai) + "]: expected [x, y, yaw]");
      }
      d.anchors.push_back(Pose2{a[0].get<double>(), a[1].get<double>(), a[2].get<double>()});
      ++ai;
    }
    d.along_jitter_m = s.value("along_jitter_m", 0.0);
    d.lateral_jitter_m = s.value("lateral_jitter_m", 0.0);
    d.yaw_jitter_rad = s.value("yaw_jitter_rad", 0.0);
    g.spawns.push_back(std::move(d));
    ++si;
  }

  g.finalize();
  g.validate();
  return g;
}

WorldGeometry WorldGeometry::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("geometry: cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  try {
    return from_json_text(ss.str());
  } catch (const std::invalid_argument& e) {
    throw std::invalid_argument(path + ": " + e.what());
  }
}

void WorldGeometry::save(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("geometry: cannot write " + path);
  out << to_json_text() << "\n";
}

// ---- Default maps ----------------------------------------------------------

WorldGeometry make_intersection(const IntersectionConfig& cfg) {
  WorldGeometry g;
  g.scenario = Scenario::kCoop;

  const double half_road = cfg.lanes_per_direction * cfg.lane_width_m;
  const double extent = half_road + cfg.arm_length_m;

  auto corner = [&](double sx, double sy) {
    // L-shaped boundary for the quadrant with signs (sx, sy).
    Polyline pl;
    pl.points = {{sx * half_road, sy * extent},
                 {sx * half_road, sy * half_road},
                 {sx * extent, sy * half_road}};
    return pl;
  };
  g.boundaries.push_back(corner(+1, +1));
  g.boundaries.push_back(corner(+1, -1));
  g.boundaries.push_back(corner(-1, -1));
  g.boundaries.push_back(corner(-1, +1));

  // Arm-end caps so that overshooting an arm is a boundary violation.
  auto cap = [&](Vec2 u) {
    const Vec2 r{u.y, -u.x};
    Polyline pl;
    pl.points = {{u.x * extent + r.x * half_road, u.y * extent + r.y * half_road},
                 {u.x * extent - r.x * half_road, u.y * extent - r.y * half_road}};
    return pl;
  };
  const std::array<Vec2, 4> arms = {Vec2{0, -1}, Vec2{-1, 0}, Vec2{0, 1}, Vec2{1, 0}};  // S W N E
  for (const Vec2& u : arms) g.boundaries.push_back(cap(u));

  // Agent slot i enters from arm i. Inbound heading is -u; right-hand
  // traffic keeps to the side of (h.y, -h.x).
  for (int i = 0; i < cfg.agents; ++i) {
    const Vec2 u = arms[static_cast<size_t>(i % 4)];
    const Vec2 h{-u.x, -u.y};
    const Vec2 right{h.y, -h.x};

    SpawnDistribution spawn;
    const double s_mid = (cfg.spawn_near_m + cfg.spawn_far_m) * 0.5;
    for (int lane = 0; lane < cfg.lanes_per_direction; ++lane) {
      const double lat = (lane + 0.5) * cfg.lane_width_m;
      Pose2 anchor;
      anchor.x = u.x * s_mid + right.x * lat;
      anchor.y = u.y * s_mid + right.y * lat;
      anchor.yaw = std::atan2(h.y, h.x);
      spawn.anchors.push_back(anchor);
    }
    spawn.along_jitter_m = (cfg.spawn_far_m - cfg.spawn_near_m) * 0.5;
    spawn.lateral_jitter_m = cfg.spawn_lateral_jitter_m;
    spawn.yaw_jitter_rad = cfg.spawn_yaw_jitter_rad;
    g.spawns.push_back(std::move(spawn));

    // Destination arms: straight across, right turn, left turn.
    const std::array<Vec2, 3> exits = {Vec2{-u.x, -u.y}, right, Vec2{-right.x, -right.y}};
    std::vector<Rect> goals;
    for (const Vec2& e : exits) {
      const Vec2 er{e.y, -e.x};  // outbound right-hand side
      const Vec2 c1 = e * cfg.goal_near_m;
      const Vec2 c2 = e * cfg.goal_far_m + er * half_road;
      Rect rect;
      rect.min = {std::min(c1.x, c2.x), std::min(c1.y, c2.y)};
      rect.max = {std::max(c1.x, c2.x), std::max(c1.y, c2.y)};
      goals.push_back(rect);
    }
    g.goal_regions.push_back(std::move(goals));
  }

  g.finalize();
  g.validate();
  return g;
}

namespace {

// Centerline of the default race loop, parameterized by arc position along
// four pieces: top straight (+x), right semicircle, bottom straight with a
// chicane bump, left semicircle. Travel is clockwise.
std::vector<Vec2> sample_centerline(const RaceTrackConfig& cfg, int n) {
  const double L = cfg.straight_length_m;
  const double R = cfg.loop_radius_m;
  const double arc = std::numbers::pi * R;
  const double total = 2.0 * L + 2.0 * arc;

  std::vector<Vec2> pts;
  pts.reserve(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) {
    const double s = total * static_cast<double>(i) / n;
    Vec2 p;
    if (s < L) {  // top straight
      p = {-L / 2.0 + s, R};
    } else if (s < L + arc) {  // right semicircle
      const double a = std::numbers::pi / 2.0 - (s - L) / R;
      p = {L / 2.0 + R * std::cos(a), R * std::sin(a)};
    } else if (s < 2.0 * L + arc) {  // bottom straight, -x travel
      const double x = L / 2.0 - (s - L - arc);
      double y = -R;
      const double half = cfg.chicane_length_m / 2.0;
      if (std::abs(x) < half) {
        const double xi = (x + half) / cfg.chicane_length_m;  // 0..1
        y += cfg.chicane_depth_m * 0.5 * (1.0 - std::cos(2.0 * std::numbers::pi * xi));
      }
      p = {x, y};
    } else {  // left semicircle
      const double a = -std::numbers::pi / 2.0 - (s - 2.0 * L - arc) / R;
      p = {-L / 2.0 + R * std::cos(a), R * std::sin(a)};
    }
    pts.push_back(p);
  }
  return pts;
}

}  // namespace

WorldGeometry make_race_track(const RaceTrackConfig& cfg) {
  WorldGeometry g;
  g.scenario = Scenario::kRace;

  const int n = cfg.centerline_samples;
  const std::vector<Vec2> center = sample_centerline(cfg, n);

  // Left-of-travel normals; for clockwise travel these point outward.
  std::vector<Vec2> normal(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) {
    const Vec2 t = normalized(center[(i + 1) % n] - center[(i + n - 1) % n]);
    normal[static_cast<size_t>(i)] = {-t.y, t.x};
  }

  Polyline outer, inner;
  outer.closed = true;
  inner.closed = true;
  for (int i = 0; i < n; ++i) {
    outer.points.push_back(center[static_cast<size_t>(i)] + normal[static_cast<size_t>(i)] * cfg.half_width_m);
    inner.points.push_back(center[static_cast<size_t>(i)] - normal[static_cast<size_t>(i)] * cfg.half_width_m);
  }
  g.boundaries.push_back(std::move(outer));
  g.boundaries.push_back(std::move(inner));

  // Cumulative arc length along the sampled centerline.
  std::vector<double> cum(static_cast<size_t>(n + 1), 0.0);
  for (int i = 0; i < n; ++i) {
    cum[static_cast<size_t>(i + 1)] =
        cum[static_cast<size_t>(i)] + norm(center[(i + 1) % n] - center[static_cast<size_t>(i)]);
  }
  const double perimeter = cum[static_cast<size_t>(n)];

  auto station = [&](double s) {
    s = std::fmod(s, perimeter);
    if (s < 0.0) s += perimeter;
    const auto it = std::upper_bound(cum.begin(), cum.end(), s);
    const int i = std::max(0, static_cast<int>(it - cum.begin()) - 1);
    const double seg = cum[static_cast<size_t>(i + 1)] - cum[static_cast<size_t>(i)];
    const double f = seg > 0.0 ? (s - cum[static_cast<size_t>(i)]) / seg : 0.0;
    const Vec2 a = center[static_cast<size_t>(i % n)];
    const Vec2 b = center[static_cast<size_t>((i + 1) % n)];
    const Vec2 p = a + (b - a) * f;
    const Vec2 t = normalized(b - a);
    return std::pair<Vec2, Vec2>{p, t};
  };

  const double gate0_s = 1.5;
  for (int k = 0; k < kRaceCheckpointCount; ++k) {
    const double s = gate0_s + perimeter * static_cast<double>(k) / kRaceCheckpointCount;
    const auto [p, t] = station(s);
    const Vec2 nrm{-t.y, t.x};
    Gate gate;
    gate.a = p - nrm * cfg.half_width_m;
    gate.b = p + nrm * cfg.half_width_m;
    gate.forward = t;
    g.checkpoints.push_back(gate);
  }

  // Staggered grid just behind gate 0.
  for (int slot = 0; slot < cfg.agents; ++slot) {
    const double s = 1.0 - cfg.spawn_gap_m * slot;
    const auto [p, t] = station(s);
    const Vec2 nrm{-t.y, t.x};
    const double side = (slot % 2 == 0) ? 1.0 : -1.0;
    SpawnDistribution spawn;
    Pose2 anchor;
    anchor.x = p.x + nrm.x * cfg.spawn_lateral_offset_m * side;
    anchor.y = p.y + nrm.y * cfg.spawn_lateral_offset_m * side;
    anchor.yaw = std::atan2(t.y, t.x);
    spawn.anchors.push_back(anchor);
    spawn.lateral_jitter_m = cfg.spawn_lateral_jitter_m;
    spawn.yaw_jitter_rad = cfg.spawn_yaw_jitter_rad;
    g.spawns.push_back(std::move(spawn));
  }

  g.finalize();
  g.validate();
  return g;
}

}  // namespace marltwin
