#include "ffmap/labeling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace ffmap {

namespace {

/// Plane oriented so the sensor origin is on the positive side; "behind"
/// is then a negative signed distance.
std::optional<PlaneModel> orient_toward_sensor(const PlaneModel& wall) {
    PlaneModel plane = wall;
    if (std::abs(plane.d) < 1e-9) return std::nullopt;  // plane through the sensor
    if (plane.d < 0.0) {
        plane.normal = {-plane.normal.x, -plane.normal.y, -plane.normal.z};
        plane.d = -plane.d;
    }
    return plane;
}

}  // namespace

std::optional<DoorDetection> classify_door_line(const PointLine& line, const PlaneModel& wall,
                                                const DoorParams& params) {
    const std::size_t n = line.points.size();
    if (n < 2) return std::nullopt;
    const auto oriented = orient_toward_sensor(wall);
    if (!oriented) return std::nullopt;

    std::vector<double> dist(n);
    for (std::size_t i = 0; i < n; ++i) dist[i] = point_plane_distance(*oriented, line.points[i]);

    // Maximal run at the bottom of the line whose returns lie behind the
    // plane by more than delta_door. Range noise pushes the odd recessed
    // return inside the margin, so a few stragglers are tolerated; the
    // budget is tight enough that the run cannot creep up the wall.
    std::size_t k = n;
    std::size_t behind_count = 0;
    {
        std::size_t violations = 0;
        std::size_t behinds = 0;
        for (std::size_t i = n; i-- > 0;) {
            if (dist[i] < -params.delta_door) {
                ++behinds;
            } else if (++violations > std::max<std::size_t>(2, (n - i) / 5)) {
                break;
            }
            if (dist[i] < -params.delta_door) {
                k = i;
                behind_count = behinds;
            }
        }
        if (behind_count < 3) k = n;  // too little evidence, treat as none
    }
    if (k == 0) return std::nullopt;  // no wall evidence above

    const double open_depth = 2.0 * params.wall_band;
    const std::size_t upper_end = k;

    int on_plane = 0;
    std::ptrdiff_t last_on_plane = -1;
    for (std::size_t i = 0; i < upper_end; ++i) {
        if (dist[i] > params.wall_band) return std::nullopt;  // occluder in front
        if (std::abs(dist[i]) <= params.wall_band) {
            ++on_plane;
            last_on_plane = static_cast<std::ptrdiff_t>(i);
        }
    }
    if (on_plane < params.min_points || last_on_plane < 0) return std::nullopt;

    DoorDetection det;
    const Point3& lintel_point = line.points[static_cast<std::size_t>(last_on_plane)];
    det.lintel_z = lintel_point.z;
    det.anchor =
        lintel_point - point_plane_distance(*oriented, lintel_point) * oriented->normal;

    if (k < n) {
        // Recessed or see-through returns below the transition.
        if (det.lintel_z < params.h_min) return std::nullopt;
        // Lines bending across a perpendicular wall scatter sideways; a
        // real opening keeps its returns under the lintel column.
        const Vec3 tangent{-oriented->normal.y, oriented->normal.x, 0.0};
        const double anchor_u = dot(det.anchor, tangent);
        int recessed = 0;
        for (std::size_t i = k; i < n; ++i) {
            if (std::abs(dot(line.points[i], tangent) - anchor_u) > 0.75) return std::nullopt;
            if (dist[i] >= -open_depth) ++recessed;
        }
        det.kind = recessed >= 3 ? DoorKind::Closed : DoorKind::Open;
        return det;
    }

    // No returns behind the plane at all: the line must simply stop at the
    // lintel (opening with nothing behind it within range).
    if (static_cast<std::size_t>(last_on_plane) + 4 < n) return std::nullopt;
    if (det.lintel_z < params.h_min) return std::nullopt;
    det.kind = DoorKind::Open;
    return det;
}

std::vector<DoorDetection> detect_doors(std::span<const PointLine> lines,
                                        std::span<const WallPlane> walls,
                                        const DoorParams& params) {
    std::vector<DoorDetection> doors;
    for (std::size_t wi = 0; wi < walls.size(); ++wi) {
        for (int li : walls[wi].member_lines) {
            if (li < 0 || static_cast<std::size_t>(li) >= lines.size()) continue;
            auto det = classify_door_line(lines[static_cast<std::size_t>(li)], walls[wi].model,
                                          params);
            if (det) {
                det->line_index = li;
                det->wall_index = static_cast<int>(wi);
                doors.push_back(*det);
            }
        }
    }
    return doors;
}

FrameLabeling label_frame(const RearrangedFrame& frame, std::span<const WallPlane> walls,
                          std::span<const DoorDetection> doors, const LabelParams& params) {
    FrameLabeling out;
    out.cloud.frame = FrameId::Robot;
    out.cloud.timestamp = frame.timestamp;
    out.cloud.points = frame.robot_points;
    out.cloud.labels.assign(frame.robot_points.size(), Label::Clutter);
    auto& labels = out.cloud.labels;

    for (std::uint32_t i : frame.floor_indices) labels[i] = Label::Floor;
    for (std::uint32_t i : frame.ceiling_indices) labels[i] = Label::Ceiling;

    // Wall by distance band; floor and ceiling assignments stay put.
    for (std::uint32_t i : frame.remainder) {
        const Point3& p = frame.robot_points[i];
        if (p.z <= params.z_floor) continue;
        for (const WallPlane& wall : walls) {
            if (std::abs(point_plane_distance(wall.model, p)) <= params.wall_band) {
                labels[i] = Label::Wall;
                break;
            }
        }
    }

    // Doors take precedence over wall within the opening span.
    struct DoorMark {
        int wall_index;
        double u;  // along-wall coordinate of the opening column
        double lintel_z;
        Point3 base;
    };
    std::vector<DoorMark> marks;
    for (const DoorDetection& det : doors) {
        if (det.wall_index < 0 || static_cast<std::size_t>(det.wall_index) >= walls.size())
            continue;
        const auto oriented = orient_toward_sensor(walls[det.wall_index].model);
        if (!oriented) continue;
        const auto& members = frame.line_members[static_cast<std::size_t>(det.line_index)];
        for (std::uint32_t i : members) {
            const Point3& p = frame.robot_points[i];
            const double dist = point_plane_distance(*oriented, p);
            if (p.z < det.lintel_z && dist < -params.delta_door) labels[i] = Label::Door;
        }
        const Vec3 tangent{-oriented->normal.y, oriented->normal.x, 0.0};
        marks.push_back({det.wall_index, dot(det.anchor, tangent), det.lintel_z, det.anchor});
    }

    // Detections on the same wall that sit close together mark one
    // opening; anchor the whole padded span so the doorway stays free in
    // the grid even where individual lines failed the rules.
    std::sort(marks.begin(), marks.end(), [](const DoorMark& a, const DoorMark& b) {
        return a.wall_index != b.wall_index ? a.wall_index < b.wall_index : a.u < b.u;
    });
    const double pad = 0.25;
    std::size_t begin = 0;
    while (begin < marks.size()) {
        std::size_t end = begin + 1;
        double lintel = marks[begin].lintel_z;
        while (end < marks.size() && marks[end].wall_index == marks[begin].wall_index &&
               marks[end].u - marks[end - 1].u < 0.6) {
            lintel = std::max(lintel, marks[end].lintel_z);
            ++end;
        }
        const auto wall =
            orient_toward_sensor(walls[static_cast<std::size_t>(marks[begin].wall_index)].model);
        const Vec3 tangent{-wall->normal.y, wall->normal.x, 0.0};
        const Point3& base = marks[begin].base;
        const double u0 = marks[begin].u;
        const double u1 = marks[end - 1].u;
        for (double u = u0 - pad; u <= u1 + pad; u += 0.02) {
            const Point3 column = base + (u - u0) * tangent;
            // Second column behind the face covers recessed panel cells.
            const Point3 recessed = column - 0.05 * wall->normal;
            for (double z = lintel; z > params.z_floor; z -= 0.01) {
                out.door_anchors.push_back({column.x, column.y, z});
                out.door_anchors.push_back({recessed.x, recessed.y, z});
            }
        }
        begin = end;
    }
    return out;
}

}  // namespace ffmap
