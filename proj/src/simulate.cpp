#include "ffmap/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <random>
#include <sstream>

#include "ffmap/errors.hpp"

namespace ffmap {

Pose vertical_mount_pose(double mount_height) {
    // Cyclic axis map: sensor x -> robot z, sensor y (spin axis) -> robot x,
    // sensor z -> robot y. -120 degrees about (1,1,1)/sqrt(3).
    Pose mount;
    mount.rotation = {0.5, -0.5, -0.5, -0.5};
    mount.translation = {0.0, 0.0, mount_height};
    return mount;
}

namespace {

constexpr double kPi = 3.141592653589793;
constexpr double kRayEps = 1e-9;

struct WallFrame {
    Point2 origin;
    double ux, uy;  // unit along-wall direction
    double vx, vy;  // unit left normal
    double length;
    double half_thickness;
    double height;
    std::vector<int> door_ids;
};

struct Interval {
    double t_near;
    double t_far;
    int near_axis;  // 0 = u, 1 = v, 2 = z
    bool hit;
};

Interval slab_intersect(double ou, double du, double lo_u, double hi_u, double ov, double dv,
                        double lo_v, double hi_v, double oz, double dz, double lo_z, double hi_z) {
    Interval res{0.0, std::numeric_limits<double>::max(), -1, true};
    const double o[3] = {ou, ov, oz};
    const double d[3] = {du, dv, dz};
    const double lo[3] = {lo_u, lo_v, lo_z};
    const double hi[3] = {hi_u, hi_v, hi_z};
    res.t_near = -std::numeric_limits<double>::max();
    for (int a = 0; a < 3; ++a) {
        if (std::abs(d[a]) < 1e-15) {
            if (o[a] < lo[a] || o[a] > hi[a]) {
                res.hit = false;
                return res;
            }
            continue;
        }
        double t0 = (lo[a] - o[a]) / d[a];
        double t1 = (hi[a] - o[a]) / d[a];
        if (t0 > t1) std::swap(t0, t1);
        if (t0 > res.t_near) {
            res.t_near = t0;
            res.near_axis = a;
        }
        res.t_far = std::min(res.t_far, t1);
        if (res.t_near > res.t_far) {
            res.hit = false;
            return res;
        }
    }
    return res;
}

class RayCaster {
  public:
    RayCaster(const SceneSpec& scene, double max_range)
        : scene_(scene), max_range_(max_range) {
        frames_.reserve(scene.walls.size());
        double min_x = std::numeric_limits<double>::max(), min_y = min_x;
        double max_x = std::numeric_limits<double>::lowest(), max_y = max_x;
        for (const WallSegment& w : scene.walls) {
            WallFrame f;
            f.origin = w.from;
            const double dx = w.to.x - w.from.x;
            const double dy = w.to.y - w.from.y;
            f.length = std::hypot(dx, dy);
            f.ux = dx / f.length;
            f.uy = dy / f.length;
            f.vx = -f.uy;
            f.vy = f.ux;
            f.half_thickness = 0.5 * w.thickness;
            f.height = w.height > 0.0 ? w.height : scene.ceiling_height;
            frames_.push_back(f);
            min_x = std::min({min_x, w.from.x, w.to.x});
            min_y = std::min({min_y, w.from.y, w.to.y});
            max_x = std::max({max_x, w.from.x, w.to.x});
            max_y = std::max({max_y, w.from.y, w.to.y});
        }
        for (const BoxSpec& b : scene.boxes) {
            min_x = std::min(min_x, b.min.x);
            min_y = std::min(min_y, b.min.y);
            max_x = std::max(max_x, b.max().x);
            max_y = std::max(max_y, b.max().y);
        }
        for (std::size_t d = 0; d < scene.doors.size(); ++d) {
            const int w = scene.doors[d].wall;
            if (w >= 0 && static_cast<std::size_t>(w) < frames_.size())
                frames_[w].door_ids.push_back(static_cast<int>(d));
        }
        floor_min_x_ = min_x - 1.0;
        floor_min_y_ = min_y - 1.0;
        floor_max_x_ = max_x + 1.0;
        floor_max_y_ = max_y + 1.0;
    }

    bool point_in_solid(const Point3& p) const {
        for (std::size_t wi = 0; wi < frames_.size(); ++wi) {
            const WallFrame& f = frames_[wi];
            const double rx = p.x - f.origin.x;
            const double ry = p.y - f.origin.y;
            const double u = rx * f.ux + ry * f.uy;
            const double v = rx * f.vx + ry * f.vy;
            if (u <= 0.0 || u >= f.length || std::abs(v) >= f.half_thickness || p.z <= 0.0 ||
                p.z >= f.height)
                continue;
            bool in_opening = false;
            for (int d : f.door_ids) {
                const DoorSpec& door = scene_.doors[static_cast<std::size_t>(d)];
                if (door.kind == DoorKind::Open && u >= door.offset &&
                    u <= door.offset + door.width && p.z <= door.lintel) {
                    in_opening = true;
                    break;
                }
            }
            if (!in_opening) return true;
        }
        for (const BoxSpec& b : scene_.boxes) {
            const Point3 hi = b.max();
            if (p.x > b.min.x && p.x < hi.x && p.y > b.min.y && p.y < hi.y && p.z > b.min.z &&
                p.z < hi.z)
                return true;
        }
        return false;
    }

    /// Nearest surface along origin + t * dir, t in (0, max_range].
    bool cast(const Point3& origin, const Vec3& dir, double& range, Label& label) const {
        double best_t = max_range_;
        Label best_label = Label::Clutter;
        bool found = false;

        auto horizontal_plane = [&](double z, Label plane_label) {
            if (std::abs(dir.z) < 1e-15) return;
            const double t = (z - origin.z) / dir.z;
            if (t <= kRayEps || t >= best_t) return;
            const double hx = origin.x + t * dir.x;
            const double hy = origin.y + t * dir.y;
            if (hx < floor_min_x_ || hx > floor_max_x_ || hy < floor_min_y_ || hy > floor_max_y_)
                return;
            best_t = t;
            best_label = plane_label;
            found = true;
        };
        horizontal_plane(0.0, Label::Floor);
        horizontal_plane(scene_.ceiling_height, Label::Ceiling);

        for (std::size_t wi = 0; wi < frames_.size(); ++wi) {
            const WallFrame& f = frames_[wi];
            const double rx = origin.x - f.origin.x;
            const double ry = origin.y - f.origin.y;
            const double ou = rx * f.ux + ry * f.uy;
            const double ov = rx * f.vx + ry * f.vy;
            const double du = dir.x * f.ux + dir.y * f.uy;
            const double dv = dir.x * f.vx + dir.y * f.vy;
            const Interval iv = slab_intersect(ou, du, 0.0, f.length, ov, dv, -f.half_thickness,
                                               f.half_thickness, origin.z, dir.z, 0.0, f.height);
            if (!iv.hit || iv.t_far <= kRayEps) continue;
            const double t_entry = std::max(iv.t_near, kRayEps);
            if (t_entry >= best_t) continue;

            const double ue = ou + t_entry * du;
            const double ze = origin.z + t_entry * dir.z;
            bool resolved = false;
            if (iv.near_axis == 1) {  // entered through a wall face
                for (int d : f.door_ids) {
                    const DoorSpec& door = scene_.doors[static_cast<std::size_t>(d)];
                    if (ue < door.offset || ue > door.offset + door.width || ze > door.lintel)
                        continue;
                    if (door.kind == DoorKind::Open) {
                        resolved = true;  // pass through the opening
                        break;
                    }
                    // Closed door: panel plane recessed behind the entry face.
                    const double ve = ov + t_entry * dv;
                    const double v_panel = ve > 0.0 ? ve - door.recess : ve + door.recess;
                    if (std::abs(dv) < 1e-15) break;
                    const double t_panel = (v_panel - ov) / dv;
                    const double up = ou + t_panel * du;
                    const double zp = origin.z + t_panel * dir.z;
                    if (t_panel > kRayEps && t_panel < best_t && up >= door.offset &&
                        up <= door.offset + door.width && zp >= 0.0 && zp <= door.lintel) {
                        best_t = t_panel;
                        best_label = Label::Door;
                        found = true;
                    }
                    resolved = true;
                    break;
                }
            }
            if (!resolved) {
                best_t = t_entry;
                best_label = Label::Wall;
                found = true;
            }
        }

        for (const BoxSpec& b : scene_.boxes) {
            const Point3 hi = b.max();
            const Interval iv =
                slab_intersect(origin.x, dir.x, b.min.x, hi.x, origin.y, dir.y, b.min.y, hi.y,
                               origin.z, dir.z, b.min.z, hi.z);
            if (!iv.hit || iv.t_far <= kRayEps) continue;
            const double t = std::max(iv.t_near, kRayEps);
            if (t < best_t) {
                best_t = t;
                best_label = Label::Clutter;
                found = true;
            }
        }

        range = best_t;
        label = best_label;
        return found && best_t < max_range_;
    }

  private:
    const SceneSpec& scene_;
    double max_range_;
    std::vector<WallFrame> frames_;
    double floor_min_x_ = 0, floor_min_y_ = 0, floor_max_x_ = 0, floor_max_y_ = 0;
};

}  // namespace

SimFrame simulate_frame(const SceneSpec& scene, const SensorSpec& sensor, const Pose& robot_pose,
                        std::uint64_t seed) {
    const Pose mount = vertical_mount_pose(sensor.mount_height);
    const Point3 origin = robot_pose.apply(mount.translation);
    const Quaternion world_rot = (robot_pose.rotation * mount.rotation).normalized();

    RayCaster caster(scene, sensor.max_range);
    if (caster.point_in_solid(origin)) {
        throw PoseInsideGeometry("sensor origin (" + std::to_string(origin.x) + ", " +
                                 std::to_string(origin.y) + ", " + std::to_string(origin.z) +
                                 ") lies inside scene geometry");
    }

    std::mt19937_64 rng(seed);
    std::normal_distribution<double> noise(0.0, sensor.noise_sigma);

    SimFrame frame;
    frame.robot_pose = robot_pose;
    frame.scan.n_beams = sensor.n_beams;
    frame.scan.sensor_to_robot = mount;
    frame.scan.timestamp = robot_pose.timestamp;
    frame.scan.points.reserve(static_cast<std::size_t>(sensor.n_beams) * sensor.azimuth_steps / 2);
    frame.truth.reserve(frame.scan.points.capacity());

    const double fov = deg_to_rad(sensor.fov_deg);
    for (int ring = 0; ring < sensor.n_beams; ++ring) {
        const double elevation =
            sensor.n_beams > 1
                ? -0.5 * fov + fov * static_cast<double>(ring) / (sensor.n_beams - 1)
                : 0.0;
        const double ce = std::cos(elevation);
        const double se = std::sin(elevation);
        for (int k = 0; k < sensor.azimuth_steps; ++k) {
            const double az = 2.0 * kPi * static_cast<double>(k) / sensor.azimuth_steps;
            const Vec3 dir_sensor{ce * std::cos(az), se, ce * std::sin(az)};
            const Vec3 dir_world = world_rot.rotate(dir_sensor);
            double range = 0.0;
            Label label = Label::Clutter;
            if (!caster.cast(origin, dir_world, range, label)) continue;
            if (sensor.noise_sigma > 0.0) range = std::max(0.01, range + noise(rng));
            frame.scan.points.push_back({range * dir_sensor, static_cast<std::uint16_t>(ring)});
            frame.truth.push_back(label);
        }
    }
    return frame;
}

std::vector<SimFrame> trajectory_through(const SceneSpec& scene, const SensorSpec& sensor,
                                         std::span<const Waypoint> waypoints, int n_frames,
                                         std::uint64_t seed) {
    if (waypoints.empty() || n_frames <= 0) return {};
    const double t0 = waypoints.front().time;
    const double t1 = waypoints.back().time;

    auto pose_at = [&](double t) {
        Pose pose;
        pose.timestamp = t;
        std::size_t seg = 0;
        while (seg + 2 < waypoints.size() && waypoints[seg + 1].time < t) ++seg;
        const Waypoint& a = waypoints[seg];
        const Waypoint& b = waypoints[std::min(seg + 1, waypoints.size() - 1)];
        const double span = b.time - a.time;
        const double u = span > 0.0 ? std::clamp((t - a.time) / span, 0.0, 1.0) : 0.0;
        pose.translation = {a.position.x + u * (b.position.x - a.position.x),
                            a.position.y + u * (b.position.y - a.position.y), 0.0};
        pose.rotation = slerp(Quaternion::from_yaw(deg_to_rad(a.yaw_deg)),
                              Quaternion::from_yaw(deg_to_rad(b.yaw_deg)), u);
        return pose;
    };

    std::vector<SimFrame> frames;
    frames.reserve(n_frames);
    for (int i = 0; i < n_frames; ++i) {
        const double t =
            n_frames > 1 ? t0 + (t1 - t0) * static_cast<double>(i) / (n_frames - 1) : t0;
        frames.push_back(simulate_frame(scene, sensor, pose_at(t),
                                        seed + static_cast<std::uint64_t>(i)));
    }
    return frames;
}

Trajectory trajectory_of(std::span<const SimFrame> frames) {
    Trajectory traj;
    traj.poses.reserve(frames.size());
    for (const SimFrame& f : frames) traj.poses.push_back(f.robot_pose);
    return traj;
}

}  // namespace ffmap
