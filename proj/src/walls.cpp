#include "ffmap/walls.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "ffmap/detail/plane_fit.hpp"
#include "ffmap/errors.hpp"

namespace ffmap {

std::vector<double> forward_difference(const PointLine& line) {
    if (line.points.size() < 2) throw LineTooShort{};
    std::vector<double> diffs(line.points.size() - 1);
    for (std::size_t j = 1; j < line.points.size(); ++j) {
        const Point3& prev = line.points[j - 1];
        const Point3& cur = line.points[j];
        const double dz = cur.z - prev.z;
        const double dh = horizontal_range(cur) - horizontal_range(prev);
        if (std::abs(dz) < 1e-6) {
            // Horizontal step, unless the pair is a duplicate-fill repeat.
            diffs[j - 1] =
                std::abs(dh) < 1e-6 ? 0.0 : std::numeric_limits<double>::infinity();
        } else {
            diffs[j - 1] = std::abs(dh / dz);
        }
    }
    return diffs;
}

namespace {

/// Median-of-5 filtered horizontal ranges along a line.
std::vector<double> median_ranges(const PointLine& line) {
    const std::size_t n = line.points.size();
    std::vector<double> ranges(n);
    for (std::size_t i = 0; i < n; ++i) ranges[i] = horizontal_range(line.points[i]);
    std::vector<double> smooth(n);
    double window[5];
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t lo = i >= 2 ? i - 2 : 0;
        const std::size_t hi = std::min(i + 2, n - 1);
        const std::size_t k = hi - lo + 1;
        std::copy(ranges.begin() + lo, ranges.begin() + hi + 1, window);
        std::sort(window, window + k);
        smooth[i] = window[k / 2];
    }
    return smooth;
}

std::vector<double> difference_of_ranges(const PointLine& line, std::span<const double> ranges) {
    std::vector<double> diffs(line.points.size() - 1);
    for (std::size_t j = 1; j < line.points.size(); ++j) {
        const double dz = line.points[j].z - line.points[j - 1].z;
        const double dh = ranges[j] - ranges[j - 1];
        if (std::abs(dz) < 1e-6) {
            diffs[j - 1] = std::abs(dh) < 1e-6 ? 0.0 : std::numeric_limits<double>::infinity();
        } else {
            diffs[j - 1] = std::abs(dh / dz);
        }
    }
    return diffs;
}

}  // namespace

std::vector<double> smoothed_forward_difference(const PointLine& line) {
    if (line.points.size() < 2) throw LineTooShort{};
    return difference_of_ranges(line, median_ranges(line));
}

std::vector<VerticalSegment> detect_vertical_structures(const PointLine& line,
                                                        std::span<const double> diffs,
                                                        double d_threshold, int min_points,
                                                        int line_index) {
    std::vector<VerticalSegment> segments;
    std::size_t run_start = 0;
    bool in_run = false;
    auto close_run = [&](std::size_t run_end_diff) {
        // A run of diffs [a, b] covers points [a, b + 1].
        const int first = static_cast<int>(run_start);
        const int last = static_cast<int>(run_end_diff) + 1;
        if (last - first + 1 >= min_points) {
            VerticalSegment seg;
            seg.line_index = line_index;
            seg.start_idx = first;
            seg.end_idx = last;
            seg.z_top = line.points[first].z;
            seg.z_bottom = line.points[last].z;
            segments.push_back(seg);
        }
    };
    for (std::size_t j = 0; j < diffs.size(); ++j) {
        if (diffs[j] < d_threshold) {
            if (!in_run) {
                run_start = j;
                in_run = true;
            }
        } else if (in_run) {
            close_run(j - 1);
            in_run = false;
        }
    }
    if (in_run) close_run(diffs.size() - 1);
    return segments;
}

std::optional<VerticalSegment> select_wall_candidate(std::span<const VerticalSegment> segments) {
    if (segments.empty()) return std::nullopt;
    const VerticalSegment* best = &segments[0];
    for (const auto& seg : segments) {
        if (seg.z_top > best->z_top) best = &seg;
    }
    return *best;
}

namespace {

/// Splits a segment at surface discontinuities the slope ratio misses on
/// oblique lines: a jump in z between consecutive samples (geometry lost
/// at an occlusion edge) or a persistent range offset of door-recess
/// scale. Keeps each side when it still spans min_points.
std::vector<VerticalSegment> split_at_discontinuities(const PointLine& line,
                                                      std::span<const double> smooth_ranges,
                                                      const VerticalSegment& seg,
                                                      int min_points) {
    std::vector<double> gaps;
    gaps.reserve(seg.end_idx - seg.start_idx);
    for (int i = seg.start_idx; i < seg.end_idx; ++i)
        gaps.push_back(line.points[i].z - line.points[i + 1].z);
    std::vector<double> sorted_gaps = gaps;
    std::sort(sorted_gaps.begin(), sorted_gaps.end());
    const double median_gap = sorted_gaps[sorted_gaps.size() / 2];

    std::vector<VerticalSegment> parts;
    int start = seg.start_idx;
    auto flush = [&](int last) {
        if (last - start + 1 >= min_points) {
            VerticalSegment part = seg;
            part.start_idx = start;
            part.end_idx = last;
            part.z_top = line.points[start].z;
            part.z_bottom = line.points[last].z;
            parts.push_back(part);
        }
    };
    for (int i = seg.start_idx; i < seg.end_idx; ++i) {
        const double dz = gaps[static_cast<std::size_t>(i - seg.start_idx)];
        const double dh = std::abs(smooth_ranges[static_cast<std::size_t>(i) + 1] -
                                   smooth_ranges[static_cast<std::size_t>(i)]);
        if (dz > 5.0 * median_gap + 0.02 || dh > 0.025) {
            flush(i);
            start = i + 1;
        }
    }
    flush(seg.end_idx);
    return parts;
}

/// Rejects candidate segments that sweep sideways more than they drop.
/// Lines on surfaces nearly perpendicular to the spin axis trace circular
/// arcs instead of vertical stripes; the forward difference still reads
/// near zero along such an arc, but its horizontal footprint gives it
/// away. Genuine wall stripes drift horizontally only through beam tilt.
bool segment_is_vertical(const PointLine& line, const VerticalSegment& seg) {
    double min_x = line.points[seg.start_idx].x, max_x = min_x;
    double min_y = line.points[seg.start_idx].y, max_y = min_y;
    for (int i = seg.start_idx; i <= seg.end_idx; ++i) {
        min_x = std::min(min_x, line.points[i].x);
        max_x = std::max(max_x, line.points[i].x);
        min_y = std::min(min_y, line.points[i].y);
        max_y = std::max(max_y, line.points[i].y);
    }
    const double horizontal = std::hypot(max_x - min_x, max_y - min_y);
    return horizontal <= 0.35 + 0.3 * (seg.z_top - seg.z_bottom);
}

}  // namespace

std::vector<WallCandidate> extract_wall_candidates(std::span<const PointLine> lines,
                                                   const WallParams& params) {
    std::vector<WallCandidate> candidates;
    candidates.reserve(lines.size());
    for (std::size_t i = 0; i < lines.size(); ++i) {
        const PointLine& line = lines[i];
        if (line.points.size() < 2) continue;
        const std::vector<double> smooth = median_ranges(line);
        const std::vector<double> diffs = difference_of_ranges(line, smooth);
        const auto runs = detect_vertical_structures(line, diffs, params.d_threshold,
                                                     params.min_points, static_cast<int>(i));
        std::vector<VerticalSegment> segments;
        for (const VerticalSegment& run : runs) {
            const auto parts = split_at_discontinuities(line, smooth, run, params.min_points);
            for (const VerticalSegment& part : parts) {
                if (segment_is_vertical(line, part)) segments.push_back(part);
            }
        }
        const auto selected = select_wall_candidate(segments);
        if (!selected) continue;
        WallCandidate cand;
        cand.line_index = static_cast<int>(i);
        cand.segment = *selected;
        cand.points.assign(line.points.begin() + selected->start_idx,
                           line.points.begin() + selected->end_idx + 1);
        cand.source.assign(line.source.begin() + selected->start_idx,
                           line.source.begin() + selected->end_idx + 1);
        candidates.push_back(std::move(cand));
    }
    return candidates;
}

namespace {

struct GrowingPlane {
    std::vector<int> lines;
    std::vector<Point3> points;
    std::vector<std::uint32_t> source;
    std::optional<PlaneModel> model;

    void add(const WallCandidate& cand) {
        lines.push_back(cand.line_index);
        points.insert(points.end(), cand.points.begin(), cand.points.end());
        source.insert(source.end(), cand.source.begin(), cand.source.end());
    }

    void clear() {
        lines.clear();
        points.clear();
        source.clear();
        model.reset();
    }
};

}  // namespace

std::vector<WallPlane> grow_wall_planes(std::span<const PointLine> lines, const WallParams& params,
                                        std::uint64_t seed) {
    const std::vector<WallCandidate> candidates = extract_wall_candidates(lines, params);
    std::vector<WallPlane> walls;
    if (candidates.empty()) return walls;

    std::mt19937_64 seeder(seed);
    const double max_normal_z = std::sin(deg_to_rad(params.vertical_tol_deg));

    GrowingPlane current;
    auto refit = [&]() {
        // A narrow footprint (a single straight stripe) cannot pin the
        // plane direction against noise; stay in accumulate mode until
        // the members span enough ground.
        double cx = 0.0, cy = 0.0;
        for (const Point3& p : current.points) {
            cx += p.x;
            cy += p.y;
        }
        const double inv = 1.0 / static_cast<double>(current.points.size());
        cx *= inv;
        cy *= inv;
        double sxx = 0.0, sxy = 0.0, syy = 0.0;
        for (const Point3& p : current.points) {
            const double dx = p.x - cx;
            const double dy = p.y - cy;
            sxx += dx * dx;
            sxy += dx * dy;
            syy += dy * dy;
        }
        const double tr = sxx + syy;
        const double disc = std::sqrt(std::max(0.0, 0.25 * tr * tr - sxx * syy + sxy * sxy));
        const double rms_spread = std::sqrt((0.5 * tr + disc) * inv);
        if (rms_spread < 0.10) {
            current.model.reset();
            return;
        }
        try {
            current.model = fit_plane_ransac(current.points, params.sigma_th,
                                             params.ransac_iterations, seeder(), max_normal_z);
        } catch (const DegenerateInput&) {
            current.model.reset();
        }
    };
    auto commit = [&]() {
        if (static_cast<int>(current.lines.size()) < params.min_lines_per_wall) return;
        if (params.min_top_z > 0.0) {
            double top = current.points.front().z;
            for (const Point3& p : current.points) top = std::max(top, p.z);
            if (top < params.min_top_z) return;  // furniture front, not a wall
        }
        // Walls are perpendicular to the ground; an unconstrained refit
        // tilts toward recessed panels and skews the door rules.
        PlaneModel final_model;
        try {
            final_model = detail::fit_vertical_plane_tls(current.points);
            // One robust pass: corner-crossing lines drag the fit a few
            // centimeters off the face, enough to corrupt the door rules.
            std::vector<double> residuals(current.points.size());
            for (std::size_t i = 0; i < current.points.size(); ++i)
                residuals[i] = std::abs(point_plane_distance(final_model, current.points[i]));
            std::vector<double> sorted = residuals;
            std::nth_element(sorted.begin(), sorted.begin() + sorted.size() / 2, sorted.end());
            const double cutoff = std::max(2.0 * sorted[sorted.size() / 2], 0.01);
            std::vector<Point3> kept;
            kept.reserve(current.points.size());
            for (std::size_t i = 0; i < current.points.size(); ++i)
                if (residuals[i] <= cutoff) kept.push_back(current.points[i]);
            if (kept.size() >= current.points.size() / 2)
                final_model = detail::fit_vertical_plane_tls(kept);
        } catch (const DegenerateInput&) {
            return;
        }
        WallPlane wall;
        wall.model = final_model;
        wall.member_lines = current.lines;
        wall.member_points = current.points;
        wall.member_source = current.source;
        walls.push_back(std::move(wall));
    };

    auto centroid_of = [](std::span<const Point3> pts) {
        Point3 c{};
        for (const Point3& p : pts) c = c + p;
        return (1.0 / static_cast<double>(pts.size())) * c;
    };

    Point3 last_centroid{};
    for (const WallCandidate& cand : candidates) {
        const Point3 cand_centroid = centroid_of(cand.points);
        if (current.lines.empty()) {
            current.add(cand);
            refit();
            last_centroid = cand_centroid;
            continue;
        }
        bool accept;
        if (current.model) {
            accept = line_plane_similarity(*current.model, cand.points) < params.sigma_th;
        } else {
            // No reliable plane yet: take the neighbor on trust, but only
            // a spatially adjacent one, so unrelated fragments cannot
            // chain into a single fake plane.
            accept = norm(cand_centroid - last_centroid) <= 0.6;
        }
        if (accept) {
            current.add(cand);
            refit();
        } else {
            commit();
            current.clear();
            current.add(cand);
            refit();
        }
        last_centroid = cand_centroid;
    }
    commit();
    return walls;
}

}  // namespace ffmap
