#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "ffmap/geometry.hpp"
#include "ffmap/labeling.hpp"

namespace ffmap {

/// Timestamped robot poses, strictly increasing timestamps.
struct Trajectory {
    std::vector<Pose> poses;

    double begin_time() const { return poses.front().timestamp; }
    double end_time() const { return poses.back().timestamp; }
};

/// Pose at time t: linear translation, slerp rotation between the
/// bracketing poses. Throws TimestampOutOfRange outside the span.
Pose interpolate_pose(const Trajectory& trajectory, double t);

struct FuseStats {
    std::size_t fused_frames = 0;
    std::size_t skipped_frames = 0;
};

/// Transform each frame by the pose interpolated at its timestamp and
/// concatenate. Frames outside the trajectory span are skipped with a
/// warning on stderr.
LabeledCloud fuse_frames(std::span<const LabeledCloud> frames, const Trajectory& trajectory,
                         FuseStats* stats = nullptr);

enum class CellState : std::uint8_t { Unknown = 0, Free = 1, Occupied = 2 };

struct OccupancyGrid {
    int width = 0;
    int height = 0;
    double resolution = 0.05;  // meters per cell
    double origin_x = 0.0;     // world position of cell (0, 0) corner
    double origin_y = 0.0;
    std::vector<CellState> cells;

    CellState at(int ix, int iy) const { return cells[static_cast<std::size_t>(iy) * width + ix]; }
    CellState& at(int ix, int iy) { return cells[static_cast<std::size_t>(iy) * width + ix]; }
    bool contains(int ix, int iy) const { return ix >= 0 && ix < width && iy >= 0 && iy < height; }
    int cell_x(double wx) const { return static_cast<int>(std::floor((wx - origin_x) / resolution)); }
    int cell_y(double wy) const { return static_cast<int>(std::floor((wy - origin_y) / resolution)); }
};

/// Grid of the immobile structure: cells with at least min_hits wall
/// points are occupied, cells holding door points or door anchors are
/// forced free, everything inside the convex footprint of observed floor
/// and wall points is free, the rest unknown. Throws EmptyCloud.
OccupancyGrid build_furniture_free_grid(const LabeledCloud& world_cloud, double resolution,
                                        int min_hits, std::span<const Point3> door_anchors = {});

struct SliceMode {
    enum class Kind { BelowCeiling, MidHeight } kind = Kind::MidHeight;
    // BelowCeiling: band [ceiling_height - b, ceiling_height - a].
    // MidHeight: band [z1, z2].
    double a = 0.5;
    double b = 0.6;
    double ceiling_height = 0.0;
    double z1 = 0.5;
    double z2 = 1.5;

    static SliceMode below_ceiling(double a, double b, double ceiling_height) {
        return {Kind::BelowCeiling, a, b, ceiling_height, 0, 0};
    }
    static SliceMode mid_height(double z1, double z2) {
        return {Kind::MidHeight, 0, 0, 0, z1, z2};
    }
};

/// Baseline comparison map: a cell is occupied when any point whose z
/// falls in the slice band projects into it, label-agnostic.
OccupancyGrid build_slice_grid(std::span<const Point3> world_points, const SliceMode& mode,
                               double resolution);

}  // namespace ffmap
