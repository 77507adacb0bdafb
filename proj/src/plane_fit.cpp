#include <Eigen/Dense>
#include <algorithm>
#include <random>
#include <span>

#include "ffmap/errors.hpp"
#include "ffmap/walls.hpp"

namespace ffmap {

namespace {

Point3 centroid_of(std::span<const Point3> points) {
    Point3 c{};
    for (const auto& p : points) c = c + p;
    const double inv = 1.0 / static_cast<double>(points.size());
    return inv * c;
}

Eigen::Matrix3d covariance_of(std::span<const Point3> points, const Point3& centroid) {
    Eigen::Matrix3d cov = Eigen::Matrix3d::Zero();
    for (const auto& p : points) {
        const Eigen::Vector3d d(p.x - centroid.x, p.y - centroid.y, p.z - centroid.z);
        cov += d * d.transpose();
    }
    return cov;
}

/// Flip the normal so the largest-magnitude component is positive. Keeps
/// plane sets comparable across runs.
void canonicalize(PlaneModel& plane) {
    const double ax = std::abs(plane.normal.x);
    const double ay = std::abs(plane.normal.y);
    const double az = std::abs(plane.normal.z);
    double lead = plane.normal.x;
    if (ay > ax && ay >= az)
        lead = plane.normal.y;
    else if (az > ax && az > ay)
        lead = plane.normal.z;
    if (lead < 0.0) {
        plane.normal = {-plane.normal.x, -plane.normal.y, -plane.normal.z};
        plane.d = -plane.d;
    }
}

}  // namespace

namespace detail {

/// Total-least-squares plane: centroid plus smallest covariance
/// eigenvector. Throws DegenerateInput when the points are collinear.
PlaneModel fit_plane_tls(std::span<const Point3> points) {
    if (points.size() < 3) throw DegenerateInput{};
    const Point3 c = centroid_of(points);
    const Eigen::Matrix3d cov = covariance_of(points, c);
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> solver(cov);
    const Eigen::Vector3d evals = solver.eigenvalues();  // ascending
    if (evals[1] <= 1e-9 * std::max(evals[2], 1e-300)) throw DegenerateInput{};
    const Eigen::Vector3d n = solver.eigenvectors().col(0);
    PlaneModel plane;
    plane.normal = normalized(Vec3{n.x(), n.y(), n.z()});
    plane.d = -dot(plane.normal, c);
    plane.inlier_count = static_cast<int>(points.size());
    canonicalize(plane);
    return plane;
}

}  // namespace detail

namespace detail {

/// Best vertical plane (normal in the ground plane): 2D total least
/// squares over the xy footprint.
PlaneModel fit_vertical_plane_tls(std::span<const Point3> points) {
    if (points.size() < 2) throw DegenerateInput{};
    double cx = 0.0, cy = 0.0;
    for (const auto& p : points) {
        cx += p.x;
        cy += p.y;
    }
    const double inv = 1.0 / static_cast<double>(points.size());
    cx *= inv;
    cy *= inv;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (const auto& p : points) {
        const double dx = p.x - cx;
        const double dy = p.y - cy;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    // Smallest eigenvector of the 2x2 covariance.
    const double tr = sxx + syy;
    const double det = sxx * syy - sxy * sxy;
    const double disc = std::sqrt(std::max(0.0, 0.25 * tr * tr - det));
    const double lambda_min = 0.5 * tr - disc;
    const double lambda_max = 0.5 * tr + disc;
    if (lambda_max <= 1e-12) throw DegenerateInput{};
    Vec3 normal;
    if (std::abs(sxy) > 1e-12)
        normal = {lambda_min - syy, sxy, 0.0};
    else
        normal = sxx <= syy ? Vec3{1, 0, 0} : Vec3{0, 1, 0};
    normal = normalized(normal);
    PlaneModel plane;
    plane.normal = normal;
    plane.d = -(normal.x * cx + normal.y * cy);
    plane.inlier_count = static_cast<int>(points.size());
    canonicalize(plane);
    return plane;
}

}  // namespace detail

PlaneModel fit_plane_ransac(std::span<const Point3> points, double dist_tol, int iterations,
                            std::uint64_t seed, double max_normal_z) {
    const std::size_t n = points.size();
    if (n < 3) throw DegenerateInput{};
    const bool vertical_only = max_normal_z < 1.0;

    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::size_t> pick(0, n - 1);

    std::size_t best_inliers = 0;
    Vec3 best_normal{};
    double best_d = 0.0;
    bool found = false;

    for (int it = 0; it < iterations; ++it) {
        const std::size_t i = pick(rng);
        const std::size_t j = pick(rng);
        const std::size_t k = pick(rng);
        if (i == j || j == k || i == k) continue;
        const Vec3 nvec = cross(points[j] - points[i], points[k] - points[i]);
        const double len = norm(nvec);
        if (len < 1e-12) continue;  // collinear triple
        const Vec3 normal{nvec.x / len, nvec.y / len, nvec.z / len};
        if (vertical_only && std::abs(normal.z) > max_normal_z) continue;
        const double d = -dot(normal, points[i]);
        std::size_t inliers = 0;
        for (const auto& p : points) {
            if (std::abs(dot(normal, p) + d) <= dist_tol) ++inliers;
        }
        if (inliers > best_inliers) {
            best_inliers = inliers;
            best_normal = normal;
            best_d = d;
            found = true;
        }
    }
    if (!found) throw DegenerateInput{};

    std::vector<Point3> inlier_points;
    inlier_points.reserve(best_inliers);
    for (const auto& p : points) {
        if (std::abs(dot(best_normal, p) + best_d) <= dist_tol) inlier_points.push_back(p);
    }

    PlaneModel refined;
    try {
        refined = vertical_only ? detail::fit_vertical_plane_tls(inlier_points)
                                : detail::fit_plane_tls(inlier_points);
    } catch (const DegenerateInput&) {
        // Inliers collapsed onto a line; keep the sampled plane.
        refined.normal = best_normal;
        refined.d = best_d;
        canonicalize(refined);
    }
    refined.inlier_count = static_cast<int>(inlier_points.size());
    return refined;
}

double line_plane_similarity(const PlaneModel& plane, std::span<const Point3> candidate_points) {
    if (candidate_points.empty()) return 0.0;
    double sum = 0.0;
    for (const auto& p : candidate_points) sum += std::abs(point_plane_distance(plane, p));
    return sum / static_cast<double>(candidate_points.size());
}

}  // namespace ffmap
