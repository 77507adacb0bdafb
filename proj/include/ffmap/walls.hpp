#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "ffmap/geometry.hpp"
#include "ffmap/scan.hpp"

namespace ffmap {

/// Run of consecutive line points whose forward difference stays under the
/// threshold. start_idx is the topmost point, indices inclusive.
struct VerticalSegment {
    int line_index = 0;
    int start_idx = 0;
    int end_idx = 0;
    double z_top = 0.0;
    double z_bottom = 0.0;

    int point_count() const { return end_idx - start_idx + 1; }
};

/// Absolute ratio of horizontal-range change to height change between
/// consecutive points, length len(line) - 1. A height step under 1e-6 m
/// between distinct points yields +inf (horizontal step); an exact repeat
/// of the same point (duplicate fill from resampling) yields 0.
/// Throws LineTooShort for lines with fewer than 2 points.
std::vector<double> forward_difference(const PointLine& line);

/// forward_difference computed on median-of-5 filtered horizontal ranges.
/// Range noise at centimeter sample spacing swamps the raw ratio; the
/// median keeps structure transitions sharp while flattening jitter.
std::vector<double> smoothed_forward_difference(const PointLine& line);

/// Maximal runs with difference < d_threshold spanning at least min_points
/// points, ordered top to bottom.
std::vector<VerticalSegment> detect_vertical_structures(const PointLine& line,
                                                        std::span<const double> diffs,
                                                        double d_threshold, int min_points,
                                                        int line_index = 0);

/// The highest structure is presumed wall; none when empty.
std::optional<VerticalSegment> select_wall_candidate(std::span<const VerticalSegment> segments);

/// RANSAC plane over random triples followed by a total-least-squares
/// refit of the best inlier set. Deterministic under a fixed seed.
/// Throws DegenerateInput for < 3 points or collinear input.
/// When max_normal_z < 1, sampled planes tilted further from vertical are
/// rejected and the refit is constrained to a vertical plane; a thin
/// noisy stripe cannot pin an unconstrained plane, so the growing stage
/// fits walls this way.
PlaneModel fit_plane_ransac(std::span<const Point3> points, double dist_tol, int iterations,
                            std::uint64_t seed, double max_normal_z = 1.0);

/// Mean absolute point-to-plane distance of a candidate's points.
double line_plane_similarity(const PlaneModel& plane, std::span<const Point3> candidate_points);

struct WallParams {
    double d_threshold = 1.0;       // horizontal meters per vertical meter
    int min_points = 10;
    double sigma_th = 0.05;         // plane/candidate acceptance, meters
    int min_lines_per_wall = 3;
    double vertical_tol_deg = 10.0; // max normal tilt away from horizontal
    int ransac_iterations = 100;
    /// Committed planes whose points all stay below this height are
    /// discarded as furniture fronts. 0 disables the filter; the pipeline
    /// sets it from the detected ceiling height.
    double min_top_z = 0.0;
};

struct WallCandidate {
    int line_index = 0;
    VerticalSegment segment;
    std::vector<Point3> points;
    std::vector<std::uint32_t> source;
};

/// Wall-candidate segment of each line (topmost vertical structure).
/// Lines without one produce no entry.
std::vector<WallCandidate> extract_wall_candidates(std::span<const PointLine> lines,
                                                   const WallParams& params);

struct WallPlane {
    PlaneModel model;
    std::vector<int> member_lines;
    std::vector<Point3> member_points;
    std::vector<std::uint32_t> member_source;
};

/// Grow coplanar wall candidates into planes, iterating lines in order.
/// A candidate joins the current plane while its mean distance stays under
/// sigma_th; on rejection the plane is committed and the rejected line
/// re-seeds the next one. Committed planes are refit over all member
/// points; planes that are not vertical enough or have too few lines are
/// dropped.
std::vector<WallPlane> grow_wall_planes(std::span<const PointLine> lines, const WallParams& params,
                                        std::uint64_t seed);

}  // namespace ffmap
