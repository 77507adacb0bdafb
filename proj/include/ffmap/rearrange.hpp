#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "ffmap/geometry.hpp"
#include "ffmap/scan.hpp"

namespace ffmap {

/// Angle between a raw-frame return and the sensor spin axis (+y),
/// atan2(sqrt(x^2 + z^2), y) in [0, pi]. Equal per emitter on an ideal
/// sensor. Throws ZeroRange on the zero vector.
double beam_angle(const Point3& raw_position);

/// Recover per-point ring indices from beam angles when the input carries
/// no ring channel. 1D k-means over beam angle, centers seeded uniformly;
/// rings are numbered by ascending angle. Deterministic.
std::vector<std::uint16_t> recover_rings(std::span<const Point3> raw_positions, int n_beams);

/// Split robot-frame points at z_floor. Returns (floor, rest) as index
/// partitions of the input span; floor takes z <= z_floor.
std::pair<std::vector<std::uint32_t>, std::vector<std::uint32_t>> remove_floor(
    std::span<const Point3> robot_points, double z_floor);

struct CeilingParams {
    double angle_tol_deg = 10.0;     // normal vs vertical axis
    double dist_tol = 0.05;          // inlier band, meters
    double min_height = 1.5;         // minimum plane height, meters
    double min_inlier_fraction = 0.05;
    int iterations = 200;
};

struct CeilingResult {
    PlaneModel plane;
    std::vector<std::uint32_t> ceiling;    // indices into the frame
    std::vector<std::uint32_t> remainder;  // rest minus ceiling
};

/// Largest-inlier RANSAC plane among `rest` whose normal is within
/// angle_tol of vertical and whose inlier height exceeds min_height.
/// Throws NoCeilingFound when no candidate reaches the inlier fraction.
CeilingResult extract_ceiling(std::span<const Point3> robot_points,
                              const std::vector<std::uint32_t>& rest, const CeilingParams& params,
                              std::uint64_t seed);

/// Pre-resample point line: full membership, sorted by descending z.
struct LineDraft {
    std::vector<std::uint32_t> members;  // indices into the frame
    int ring = 0;
    int side = 0;
    double beam_angle = 0.0;
};

/// Group the remaining points into at most 2 * n_beams half-ring lines.
/// Side 0 takes sensor-frame azimuth atan2(z, x) in [0, pi). Output is
/// ordered side-major (side 0 rings ascending, then side 1), points within
/// a line sorted by descending robot z. Empty halves are dropped.
std::vector<LineDraft> partition_into_lines(const OrganizedScan& scan,
                                            std::span<const Point3> robot_points,
                                            const std::vector<std::uint32_t>& remainder);

/// Reduce (or pad) a line to exactly `target` entries by decimation at
/// uniform rank intervals of the angular ordering; entry k keeps the point
/// at rank floor(k * n / target). Short lines repeat points. Ordering by
/// descending z is preserved. Throws EmptyLine on empty input.
PointLine resample_line(const LineDraft& draft, std::span<const Point3> robot_points, int target);

struct RearrangeParams {
    double z_floor = 0.10;
    CeilingParams ceiling{};
    int resample_count = 200;
};

/// Per-frame preprocessing result. Lines are resampled; line_members keeps
/// the full pre-resample membership per line for later labeling.
struct RearrangedFrame {
    std::vector<Point3> robot_points;  // all frame points in robot frame
    std::vector<std::uint32_t> floor_indices;
    std::vector<std::uint32_t> ceiling_indices;
    std::vector<std::uint32_t> remainder;
    std::optional<PlaneModel> ceiling_plane;
    std::vector<PointLine> lines;
    std::vector<std::vector<std::uint32_t>> line_members;
    double timestamp = 0.0;
};

RearrangedFrame rearrange_frame(const OrganizedScan& scan, const RearrangeParams& params,
                                std::uint64_t seed);

}  // namespace ffmap
