#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "ffmap/geometry.hpp"
#include "ffmap/labeling.hpp"
#include "ffmap/mapping.hpp"
#include "ffmap/scan.hpp"

namespace ffmap {

struct Point2 {
    double x = 0.0;
    double y = 0.0;
};

struct WallSegment {
    Point2 from{};
    Point2 to{};
    double height = 0.0;     // 0 means scene ceiling height
    double thickness = 0.15;

    double length() const { return std::hypot(to.x - from.x, to.y - from.y); }
};

struct DoorSpec {
    int wall = 0;          // index into SceneSpec::walls
    double offset = 0.0;   // meters along the wall from `from`
    double width = 0.9;
    double lintel = 2.0;   // top of the opening
    DoorKind kind = DoorKind::Open;
    double recess = 0.04;  // closed panel depth behind the scanned face
};

struct BoxSpec {
    Point3 min{};
    Vec3 size{};

    Point3 max() const { return min + size; }
};

/// Ground-truth scene: vertical wall prisms with door openings, axis
/// aligned furniture boxes, horizontal floor at z = 0 and ceiling.
struct SceneSpec {
    double ceiling_height = 3.0;
    std::vector<WallSegment> walls;
    std::vector<DoorSpec> doors;
    std::vector<BoxSpec> boxes;
};

struct SensorSpec {
    int n_beams = 32;
    double fov_deg = 40.0;     // elevation span, centered on the spin plane
    int azimuth_steps = 1800;
    double max_range = 30.0;
    double noise_sigma = 0.0;  // range noise, meters
    double mount_height = 0.8;
};

/// Extrinsic of the vertical mounting: sensor spin axis along robot +x,
/// sensor +x up, origin lifted by mount_height.
Pose vertical_mount_pose(double mount_height);

struct Waypoint {
    Point2 position{};
    double yaw_deg = 0.0;
    double time = 0.0;
};

struct SimFrame {
    OrganizedScan scan;         // raw sensor frame, with ring indices
    std::vector<Label> truth;   // per-point ground-truth label
    Pose robot_pose;            // robot -> world at scan.timestamp
};

/// Cast one frame from the given robot pose. Each (ring, azimuth) ray
/// keeps the nearest surface hit within max_range together with the label
/// of that surface; rays without a hit produce no point. Gaussian range
/// noise is applied when noise_sigma > 0. Throws PoseInsideGeometry when
/// the sensor origin lies inside a wall or box.
SimFrame simulate_frame(const SceneSpec& scene, const SensorSpec& sensor, const Pose& robot_pose,
                        std::uint64_t seed);

/// n_frames frames at times evenly spaced over the waypoint schedule,
/// poses piecewise-linear in time with shortest-arc yaw interpolation.
std::vector<SimFrame> trajectory_through(const SceneSpec& scene, const SensorSpec& sensor,
                                         std::span<const Waypoint> waypoints, int n_frames,
                                         std::uint64_t seed);

Trajectory trajectory_of(std::span<const SimFrame> frames);

/// Plain-text scene file: top-level `key = value` lines plus [wall],
/// [door], [box], [sensor] and [waypoint] sections.
struct SceneFile {
    SceneSpec scene;
    SensorSpec sensor;
    std::vector<Waypoint> waypoints;
    int frame_count = 40;
};

SceneFile load_scene(const std::string& path);
SceneFile parse_scene(std::istream& in, const std::string& name);
void save_scene(const SceneFile& file, const std::string& path);

}  // namespace ffmap
