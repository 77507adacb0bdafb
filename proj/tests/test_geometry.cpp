#include <doctest.h>

#include <random>

#include "ffmap/geometry.hpp"

using namespace ffmap;

namespace {

Pose random_pose(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    Pose pose;
    pose.translation = {5.0 * u(rng), 5.0 * u(rng), 5.0 * u(rng)};
    pose.rotation = Quaternion{u(rng) + 1.5, u(rng), u(rng), u(rng)}.normalized();
    return pose;
}

Point3 random_point(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(-10.0, 10.0);
    return {u(rng), u(rng), u(rng)};
}

}  // namespace

TEST_SUITE("geometry") {

TEST_CASE("transform_point identity and translation") {
    Pose identity;
    const Point3 p{1, 2, 3};
    const Point3 q = transform_point(identity, p);
    CHECK(q.x == doctest::Approx(1.0));
    CHECK(q.y == doctest::Approx(2.0));
    CHECK(q.z == doctest::Approx(3.0));

    Pose shift;
    shift.translation = {1, 0, 0};
    const Point3 r = transform_point(shift, {0, 0, 0});
    CHECK(r.x == doctest::Approx(1.0));
    CHECK(r.y == doctest::Approx(0.0));
    CHECK(r.z == doctest::Approx(0.0));
}

TEST_CASE("transform_point rotates 90 degrees about z") {
    Pose pose;
    pose.rotation = Quaternion::from_yaw(deg_to_rad(90.0));
    const Point3 q = transform_point(pose, {1, 0, 0});
    CHECK(q.x == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(q.y == doctest::Approx(1.0));
    CHECK(q.z == doctest::Approx(0.0));
}

TEST_CASE("point_plane_distance sign convention") {
    const PlaneModel ground{{0, 0, 1}, 0.0, 0};
    CHECK(point_plane_distance(ground, {0, 0, 2}) == doctest::Approx(2.0));
    CHECK(point_plane_distance(ground, {4, -1, 0}) == doctest::Approx(0.0));

    const PlaneModel x1{{1, 0, 0}, -1.0, 0};
    CHECK(point_plane_distance(x1, {0, 0, 0}) == doctest::Approx(-1.0));
}

TEST_CASE("point_plane_distance is linear along the normal") {
    const PlaneModel plane{normalized(Vec3{1, 2, -1}), 0.4, 0};
    std::mt19937_64 rng(11);
    for (int i = 0; i < 50; ++i) {
        const Point3 p = random_point(rng);
        const double d0 = point_plane_distance(plane, p);
        const double step = 0.73;
        const double d1 = point_plane_distance(plane, p + step * plane.normal);
        CHECK(d1 - d0 == doctest::Approx(step).epsilon(1e-12));
    }
}

TEST_CASE("rigid transforms preserve pairwise distances") {
    std::mt19937_64 rng(42);
    for (int trial = 0; trial < 30; ++trial) {
        const Pose pose = random_pose(rng);
        const Point3 a = random_point(rng);
        const Point3 b = random_point(rng);
        const double before = norm(a - b);
        const double after = norm(pose.apply(a) - pose.apply(b));
        CHECK(std::abs(after - before) < 1e-9);
    }
}

TEST_CASE("inverse undoes a pose to 1e-9") {
    std::mt19937_64 rng(43);
    for (int trial = 0; trial < 30; ++trial) {
        const Pose pose = random_pose(rng);
        const Pose inv = pose.inverse();
        const Point3 p = random_point(rng);
        const Point3 back = inv.apply(pose.apply(p));
        CHECK(norm(back - p) < 1e-9);
    }
}

TEST_CASE("slerp midpoints and endpoints") {
    const Quaternion a = Quaternion::identity();
    const Quaternion b = Quaternion::from_yaw(deg_to_rad(90.0));
    const Quaternion mid = slerp(a, b, 0.5);
    const Point3 q = mid.rotate({1, 0, 0});
    CHECK(q.x == doctest::Approx(std::sqrt(0.5)));
    CHECK(q.y == doctest::Approx(std::sqrt(0.5)));
    const Quaternion end = slerp(a, b, 1.0);
    CHECK(end.rotate(Point3{1, 0, 0}).y == doctest::Approx(1.0));
}

TEST_CASE("quaternion composition matches sequential rotation") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 20; ++trial) {
        const Pose a = random_pose(rng);
        const Pose b = random_pose(rng);
        const Point3 p = random_point(rng);
        const Point3 via_compose = a.compose(b).apply(p);
        const Point3 sequential = a.apply(b.apply(p));
        CHECK(norm(via_compose - sequential) < 1e-9);
    }
}

}  // TEST_SUITE
