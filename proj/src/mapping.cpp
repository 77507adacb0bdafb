#include "ffmap/mapping.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <limits>

#include "ffmap/errors.hpp"

namespace ffmap {

Pose interpolate_pose(const Trajectory& trajectory, double t) {
    const auto& poses = trajectory.poses;
    if (poses.empty()) throw TimestampOutOfRange("trajectory is empty");
    if (t < poses.front().timestamp || t > poses.back().timestamp) {
        throw TimestampOutOfRange("timestamp " + std::to_string(t) +
                                  " outside trajectory span [" +
                                  std::to_string(poses.front().timestamp) + ", " +
                                  std::to_string(poses.back().timestamp) + "]");
    }
    const auto it = std::lower_bound(
        poses.begin(), poses.end(), t,
        [](const Pose& pose, double time) { return pose.timestamp < time; });
    if (it == poses.begin()) return poses.front();
    if (it == poses.end()) return poses.back();
    const Pose& hi = *it;
    const Pose& lo = *(it - 1);
    const double span = hi.timestamp - lo.timestamp;
    if (span <= 0.0) return hi;
    const double u = std::clamp((t - lo.timestamp) / span, 0.0, 1.0);
    Pose out;
    out.translation = lo.translation + u * (hi.translation - lo.translation);
    out.rotation = slerp(lo.rotation, hi.rotation, u);
    out.timestamp = t;
    return out;
}

LabeledCloud fuse_frames(std::span<const LabeledCloud> frames, const Trajectory& trajectory,
                         FuseStats* stats) {
    LabeledCloud world;
    world.frame = FrameId::World;
    std::size_t total = 0;
    for (const auto& f : frames) total += f.size();
    world.points.reserve(total);
    world.labels.reserve(total);

    for (const LabeledCloud& frame : frames) {
        Pose pose;
        try {
            pose = interpolate_pose(trajectory, frame.timestamp);
        } catch (const TimestampOutOfRange& e) {
            std::cerr << "warning: skipping frame at t=" << frame.timestamp << ": " << e.what()
                      << "\n";
            if (stats) ++stats->skipped_frames;
            continue;
        }
        for (std::size_t i = 0; i < frame.size(); ++i) {
            world.points.push_back(pose.apply(frame.points[i]));
            world.labels.push_back(frame.labels[i]);
        }
        if (stats) ++stats->fused_frames;
    }
    return world;
}

namespace {

struct Cell2 {
    int x;
    int y;
    bool operator<(const Cell2& o) const { return x != o.x ? x < o.x : y < o.y; }
    bool operator==(const Cell2& o) const { return x == o.x && y == o.y; }
};

double cross2(const Cell2& o, const Cell2& a, const Cell2& b) {
    return static_cast<double>(a.x - o.x) * (b.y - o.y) -
           static_cast<double>(a.y - o.y) * (b.x - o.x);
}

/// Andrew monotone chain over cell coordinates, counter-clockwise.
std::vector<Cell2> convex_hull(std::vector<Cell2> pts) {
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    const std::size_t n = pts.size();
    if (n < 3) return pts;
    std::vector<Cell2> hull(2 * n);
    std::size_t k = 0;
    for (std::size_t i = 0; i < n; ++i) {
        while (k >= 2 && cross2(hull[k - 2], hull[k - 1], pts[i]) <= 0) --k;
        hull[k++] = pts[i];
    }
    const std::size_t lower = k + 1;
    for (std::size_t i = n - 1; i-- > 0;) {
        while (k >= lower && cross2(hull[k - 2], hull[k - 1], pts[i]) <= 0) --k;
        hull[k++] = pts[i];
    }
    hull.resize(k - 1);
    return hull;
}

bool inside_hull(const std::vector<Cell2>& hull, int x, int y) {
    if (hull.size() < 3) return false;
    for (std::size_t i = 0; i < hull.size(); ++i) {
        const Cell2& a = hull[i];
        const Cell2& b = hull[(i + 1) % hull.size()];
        if (cross2(a, b, Cell2{x, y}) < 0) return false;
    }
    return true;
}

struct GridBounds {
    double min_x = std::numeric_limits<double>::max();
    double min_y = std::numeric_limits<double>::max();
    double max_x = std::numeric_limits<double>::lowest();
    double max_y = std::numeric_limits<double>::lowest();

    void expand(const Point3& p) {
        min_x = std::min(min_x, p.x);
        min_y = std::min(min_y, p.y);
        max_x = std::max(max_x, p.x);
        max_y = std::max(max_y, p.y);
    }
};

OccupancyGrid make_grid(const GridBounds& bounds, double resolution) {
    OccupancyGrid grid;
    grid.resolution = resolution;
    // Origin at the floor of the minimum corner minus one cell of padding.
    grid.origin_x = std::floor(bounds.min_x / resolution) * resolution - resolution;
    grid.origin_y = std::floor(bounds.min_y / resolution) * resolution - resolution;
    grid.width = static_cast<int>(std::ceil((bounds.max_x - grid.origin_x) / resolution)) + 2;
    grid.height = static_cast<int>(std::ceil((bounds.max_y - grid.origin_y) / resolution)) + 2;
    grid.cells.assign(static_cast<std::size_t>(grid.width) * grid.height, CellState::Unknown);
    return grid;
}

}  // namespace

OccupancyGrid build_furniture_free_grid(const LabeledCloud& world_cloud, double resolution,
                                        int min_hits, std::span<const Point3> door_anchors) {
    if (world_cloud.points.empty()) throw EmptyCloud{};

    GridBounds bounds;
    for (const auto& p : world_cloud.points) bounds.expand(p);
    for (const auto& p : door_anchors) bounds.expand(p);
    OccupancyGrid grid = make_grid(bounds, resolution);

    const std::size_t n_cells = grid.cells.size();
    std::vector<std::uint32_t> wall_hits(n_cells, 0);
    std::vector<std::uint32_t> door_hits(n_cells, 0);
    std::vector<Cell2> footprint;

    for (std::size_t i = 0; i < world_cloud.points.size(); ++i) {
        const Point3& p = world_cloud.points[i];
        const int ix = grid.cell_x(p.x);
        const int iy = grid.cell_y(p.y);
        if (!grid.contains(ix, iy)) continue;
        const std::size_t idx = static_cast<std::size_t>(iy) * grid.width + ix;
        switch (world_cloud.labels[i]) {
            case Label::Wall:
                ++wall_hits[idx];
                footprint.push_back({ix, iy});
                break;
            case Label::Door:
                ++door_hits[idx];
                break;
            case Label::Floor:
                footprint.push_back({ix, iy});
                break;
            default:
                break;
        }
    }
    for (const auto& p : door_anchors) {
        const int ix = grid.cell_x(p.x);
        const int iy = grid.cell_y(p.y);
        if (grid.contains(ix, iy))
            ++door_hits[static_cast<std::size_t>(iy) * grid.width + ix];
    }

    const std::vector<Cell2> hull = convex_hull(std::move(footprint));
    const auto hits = static_cast<std::uint32_t>(std::max(min_hits, 1));
    for (int iy = 0; iy < grid.height; ++iy) {
        for (int ix = 0; ix < grid.width; ++ix) {
            const std::size_t idx = static_cast<std::size_t>(iy) * grid.width + ix;
            if (door_hits[idx] >= hits)
                grid.cells[idx] = CellState::Free;  // openings stay traversable
            else if (wall_hits[idx] >= hits)
                grid.cells[idx] = CellState::Occupied;
            else if (inside_hull(hull, ix, iy))
                grid.cells[idx] = CellState::Free;
        }
    }
    return grid;
}

OccupancyGrid build_slice_grid(std::span<const Point3> world_points, const SliceMode& mode,
                               double resolution) {
    double lo = mode.z1;
    double hi = mode.z2;
    if (mode.kind == SliceMode::Kind::BelowCeiling) {
        lo = mode.ceiling_height - mode.b;
        hi = mode.ceiling_height - mode.a;
    }

    GridBounds bounds;
    for (const auto& p : world_points) bounds.expand(p);
    if (world_points.empty()) throw EmptyCloud{};
    OccupancyGrid grid = make_grid(bounds, resolution);

    std::vector<Cell2> footprint;
    for (const auto& p : world_points) {
        const int ix = grid.cell_x(p.x);
        const int iy = grid.cell_y(p.y);
        if (!grid.contains(ix, iy)) continue;
        footprint.push_back({ix, iy});
        if (p.z >= lo && p.z <= hi)
            grid.at(ix, iy) = CellState::Occupied;
    }
    const std::vector<Cell2> hull = convex_hull(std::move(footprint));
    for (int iy = 0; iy < grid.height; ++iy) {
        for (int ix = 0; ix < grid.width; ++ix) {
            if (grid.at(ix, iy) == CellState::Unknown && inside_hull(hull, ix, iy))
                grid.at(ix, iy) = CellState::Free;
        }
    }
    return grid;
}

}  // namespace ffmap
