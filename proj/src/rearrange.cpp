#include "ffmap/rearrange.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include "ffmap/detail/plane_fit.hpp"
#include "ffmap/errors.hpp"

namespace ffmap {

double beam_angle(const Point3& raw_position) {
    const double lateral = std::hypot(raw_position.x, raw_position.z);
    if (lateral == 0.0 && raw_position.y == 0.0) throw ZeroRange{};
    return std::atan2(lateral, raw_position.y);
}

std::vector<std::uint16_t> recover_rings(std::span<const Point3> raw_positions, int n_beams) {
    std::vector<double> angles(raw_positions.size());
    for (std::size_t i = 0; i < raw_positions.size(); ++i) angles[i] = beam_angle(raw_positions[i]);

    double lo = std::numeric_limits<double>::max();
    double hi = std::numeric_limits<double>::lowest();
    for (double a : angles) {
        lo = std::min(lo, a);
        hi = std::max(hi, a);
    }
    if (raw_positions.empty() || n_beams <= 1 || hi - lo < 1e-12)
        return std::vector<std::uint16_t>(raw_positions.size(), 0);

    // 1D k-means, centers seeded uniformly over the observed angle span.
    std::vector<double> centers(n_beams);
    for (int k = 0; k < n_beams; ++k)
        centers[k] = lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(n_beams - 1);

    std::vector<std::uint16_t> assignment(angles.size(), 0);
    std::vector<double> sums(n_beams);
    std::vector<std::size_t> counts(n_beams);
    for (int iter = 0; iter < 32; ++iter) {
        bool changed = false;
        for (std::size_t i = 0; i < angles.size(); ++i) {
            // Centers stay sorted, so the nearest can be found by binary search.
            const auto it = std::lower_bound(centers.begin(), centers.end(), angles[i]);
            int best = static_cast<int>(it - centers.begin());
            if (best == n_beams) best = n_beams - 1;
            if (best > 0 && angles[i] - centers[best - 1] <= centers[best] - angles[i]) --best;
            if (assignment[i] != best) {
                assignment[i] = static_cast<std::uint16_t>(best);
                changed = true;
            }
        }
        if (!changed && iter > 0) break;
        std::fill(sums.begin(), sums.end(), 0.0);
        std::fill(counts.begin(), counts.end(), 0u);
        for (std::size_t i = 0; i < angles.size(); ++i) {
            sums[assignment[i]] += angles[i];
            ++counts[assignment[i]];
        }
        for (int k = 0; k < n_beams; ++k) {
            if (counts[k] > 0) centers[k] = sums[k] / static_cast<double>(counts[k]);
        }
        std::sort(centers.begin(), centers.end());
    }
    // Rings are numbered by ascending elevation, i.e. descending angle
    // from the spin axis.
    for (auto& ring : assignment)
        ring = static_cast<std::uint16_t>(n_beams - 1 - ring);
    return assignment;
}

std::pair<std::vector<std::uint32_t>, std::vector<std::uint32_t>> remove_floor(
    std::span<const Point3> robot_points, double z_floor) {
    std::vector<std::uint32_t> floor_idx;
    std::vector<std::uint32_t> rest;
    rest.reserve(robot_points.size());
    for (std::uint32_t i = 0; i < robot_points.size(); ++i) {
        if (robot_points[i].z <= z_floor)
            floor_idx.push_back(i);
        else
            rest.push_back(i);
    }
    return {std::move(floor_idx), std::move(rest)};
}

CeilingResult extract_ceiling(std::span<const Point3> robot_points,
                              const std::vector<std::uint32_t>& rest, const CeilingParams& params,
                              std::uint64_t seed) {
    // Candidate pool: only points high enough to lie on a ceiling.
    std::vector<std::uint32_t> pool;
    pool.reserve(rest.size());
    for (std::uint32_t i : rest) {
        if (robot_points[i].z > params.min_height) pool.push_back(i);
    }
    const std::size_t min_inliers = std::max<std::size_t>(
        3, static_cast<std::size_t>(params.min_inlier_fraction * static_cast<double>(rest.size())));
    if (pool.size() < min_inliers) throw NoCeilingFound{};

    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
    const double cos_tol = std::cos(deg_to_rad(params.angle_tol_deg));

    std::size_t best_inliers = 0;
    Vec3 best_normal{};
    double best_d = 0.0;

    for (int it = 0; it < params.iterations; ++it) {
        const Point3& a = robot_points[pool[pick(rng)]];
        const Point3& b = robot_points[pool[pick(rng)]];
        const Point3& c = robot_points[pool[pick(rng)]];
        Vec3 nvec = cross(b - a, c - a);
        const double len = norm(nvec);
        if (len < 1e-12) continue;
        Vec3 normal{nvec.x / len, nvec.y / len, nvec.z / len};
        if (std::abs(normal.z) < cos_tol) continue;  // not horizontal enough
        if (normal.z < 0.0) normal = {-normal.x, -normal.y, -normal.z};
        const double d = -dot(normal, a);
        std::size_t inliers = 0;
        for (std::uint32_t i : pool) {
            if (std::abs(dot(normal, robot_points[i]) + d) <= params.dist_tol) ++inliers;
        }
        if (inliers > best_inliers) {
            best_inliers = inliers;
            best_normal = normal;
            best_d = d;
        }
    }
    if (best_inliers < min_inliers) throw NoCeilingFound{};

    std::vector<Point3> inlier_points;
    inlier_points.reserve(best_inliers);
    for (std::uint32_t i : pool) {
        if (std::abs(dot(best_normal, robot_points[i]) + best_d) <= params.dist_tol)
            inlier_points.push_back(robot_points[i]);
    }
    PlaneModel plane;
    try {
        plane = detail::fit_plane_tls(inlier_points);
    } catch (const DegenerateInput&) {
        plane.normal = best_normal;
        plane.d = best_d;
    }
    if (plane.normal.z < 0.0) {
        plane.normal = {-plane.normal.x, -plane.normal.y, -plane.normal.z};
        plane.d = -plane.d;
    }

    // Mean inlier height must clear min_height (rules out table tops).
    double mean_z = 0.0;
    CeilingResult result;
    result.plane = plane;
    for (std::uint32_t i : rest) {
        if (std::abs(point_plane_distance(plane, robot_points[i])) <= params.dist_tol) {
            result.ceiling.push_back(i);
            mean_z += robot_points[i].z;
        } else {
            result.remainder.push_back(i);
        }
    }
    if (result.ceiling.size() < min_inliers) throw NoCeilingFound{};
    mean_z /= static_cast<double>(result.ceiling.size());
    if (mean_z <= params.min_height) throw NoCeilingFound{};
    result.plane.inlier_count = static_cast<int>(result.ceiling.size());
    return result;
}

std::vector<LineDraft> partition_into_lines(const OrganizedScan& scan,
                                            std::span<const Point3> robot_points,
                                            const std::vector<std::uint32_t>& remainder) {
    const int n = std::max(scan.n_beams, 1);
    // slot = side * n_beams + ring
    std::vector<std::vector<std::uint32_t>> slots(static_cast<std::size_t>(2) * n);
    std::vector<double> angle_sum(slots.size(), 0.0);

    for (std::uint32_t i : remainder) {
        const RawPoint& rp = scan.points[i];
        if (rp.ring >= n) continue;
        const double az = std::atan2(rp.position.z, rp.position.x);
        const int side = (az >= 0.0 && az < 3.141592653589793) ? 0 : 1;
        const std::size_t slot = static_cast<std::size_t>(side) * n + rp.ring;
        slots[slot].push_back(i);
        angle_sum[slot] += beam_angle(rp.position);
    }

    std::vector<LineDraft> lines;
    lines.reserve(slots.size());
    for (std::size_t slot = 0; slot < slots.size(); ++slot) {
        auto& members = slots[slot];
        if (members.empty()) continue;
        std::stable_sort(members.begin(), members.end(),
                         [&](std::uint32_t a, std::uint32_t b) {
                             return robot_points[a].z > robot_points[b].z;
                         });
        LineDraft draft;
        draft.ring = static_cast<int>(slot % n);
        draft.side = static_cast<int>(slot / n);
        draft.beam_angle = angle_sum[slot] / static_cast<double>(members.size());
        draft.members = std::move(members);
        lines.push_back(std::move(draft));
    }
    return lines;
}

PointLine resample_line(const LineDraft& draft, std::span<const Point3> robot_points, int target) {
    if (draft.members.empty()) throw EmptyLine{};
    const std::size_t n = draft.members.size();
    PointLine line;
    line.ring = draft.ring;
    line.side = draft.side;
    line.beam_angle = draft.beam_angle;
    line.points.reserve(target);
    line.source.reserve(target);
    for (int k = 0; k < target; ++k) {
        const std::size_t j = (static_cast<std::size_t>(k) * n) / static_cast<std::size_t>(target);
        line.source.push_back(draft.members[j]);
        line.points.push_back(robot_points[draft.members[j]]);
    }
    return line;
}

RearrangedFrame rearrange_frame(const OrganizedScan& scan, const RearrangeParams& params,
                                std::uint64_t seed) {
    RearrangedFrame frame;
    frame.timestamp = scan.timestamp;
    frame.robot_points.reserve(scan.points.size());
    for (const RawPoint& rp : scan.points)
        frame.robot_points.push_back(scan.sensor_to_robot.apply(rp.position));

    auto [floor_idx, rest] = remove_floor(frame.robot_points, params.z_floor);
    frame.floor_indices = std::move(floor_idx);

    try {
        CeilingResult ceiling = extract_ceiling(frame.robot_points, rest, params.ceiling, seed);
        frame.ceiling_plane = ceiling.plane;
        frame.ceiling_indices = std::move(ceiling.ceiling);
        frame.remainder = std::move(ceiling.remainder);
    } catch (const NoCeilingFound&) {
        frame.remainder = std::move(rest);
    }

    std::vector<LineDraft> drafts = partition_into_lines(scan, frame.robot_points, frame.remainder);
    frame.lines.reserve(drafts.size());
    frame.line_members.reserve(drafts.size());
    for (auto& draft : drafts) {
        frame.lines.push_back(resample_line(draft, frame.robot_points, params.resample_count));
        frame.line_members.push_back(std::move(draft.members));
    }
    return frame;
}

}  // namespace ffmap
