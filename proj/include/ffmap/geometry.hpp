#pragma once

#include <cmath>
#include <cstdint>
#include <string_view>

namespace ffmap {

/// 3D point / vector in meters. Coordinates are expected to be finite;
/// readers and the simulator reject NaN/Inf at the boundary.
struct Point3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;
};

using Vec3 = Point3;

inline Point3 operator+(const Point3& a, const Point3& b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
inline Point3 operator-(const Point3& a, const Point3& b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
inline Point3 operator*(double s, const Point3& p) { return {s * p.x, s * p.y, s * p.z}; }
inline Point3 operator*(const Point3& p, double s) { return s * p; }

inline double dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
inline Vec3 cross(const Vec3& a, const Vec3& b) {
    return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}
inline double squared_norm(const Vec3& v) { return dot(v, v); }
inline double norm(const Vec3& v) { return std::sqrt(squared_norm(v)); }
inline Vec3 normalized(const Vec3& v) {
    const double n = norm(v);
    return n > 0.0 ? Vec3{v.x / n, v.y / n, v.z / n} : v;
}
inline bool finite(const Point3& p) {
    return std::isfinite(p.x) && std::isfinite(p.y) && std::isfinite(p.z);
}
/// Horizontal range from the frame origin, hypot(x, y).
inline double horizontal_range(const Point3& p) { return std::hypot(p.x, p.y); }

/// Semantic point label. Byte values are part of the on-disk format.
enum class Label : std::uint8_t {
    Floor = 0,
    Ceiling = 1,
    Wall = 2,
    Door = 3,
    Clutter = 4,
};

inline constexpr int kLabelCount = 5;

inline std::string_view label_name(Label l) {
    switch (l) {
        case Label::Floor: return "floor";
        case Label::Ceiling: return "ceiling";
        case Label::Wall: return "wall";
        case Label::Door: return "door";
        case Label::Clutter: return "clutter";
    }
    return "invalid";
}

/// Unit quaternion, stored (w, x, y, z). Trajectory files store (x, y, z, w).
struct Quaternion {
    double w = 1.0;
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    static Quaternion identity() { return {}; }

    static Quaternion from_axis_angle(const Vec3& axis, double angle_rad) {
        const Vec3 u = ffmap::normalized(axis);
        const double h = 0.5 * angle_rad;
        const double s = std::sin(h);
        return {std::cos(h), u.x * s, u.y * s, u.z * s};
    }

    static Quaternion from_yaw(double yaw_rad) { return from_axis_angle({0, 0, 1}, yaw_rad); }

    double norm() const { return std::sqrt(w * w + x * x + y * y + z * z); }

    Quaternion normalized() const {
        const double n = norm();
        return {w / n, x / n, y / n, z / n};
    }

    Quaternion conjugate() const { return {w, -x, -y, -z}; }

    Quaternion operator*(const Quaternion& o) const {
        return {
            w * o.w - x * o.x - y * o.y - z * o.z,
            w * o.x + x * o.w + y * o.z - z * o.y,
            w * o.y - x * o.z + y * o.w + z * o.x,
            w * o.z + x * o.y - y * o.x + z * o.w,
        };
    }

    Vec3 rotate(const Vec3& v) const {
        // q v q* expanded via the double-cross identity.
        const Vec3 u{x, y, z};
        const Vec3 t = 2.0 * cross(u, v);
        return v + w * t + cross(u, t);
    }
};

/// Spherical-linear interpolation along the shorter arc, t in [0, 1].
inline Quaternion slerp(const Quaternion& a, Quaternion b, double t) {
    double cos_half = a.w * b.w + a.x * b.x + a.y * b.y + a.z * b.z;
    if (cos_half < 0.0) {
        b = {-b.w, -b.x, -b.y, -b.z};
        cos_half = -cos_half;
    }
    if (cos_half > 1.0 - 1e-10) {
        // Nearly identical rotations: fall back to nlerp.
        Quaternion r{a.w + t * (b.w - a.w), a.x + t * (b.x - a.x), a.y + t * (b.y - a.y),
                     a.z + t * (b.z - a.z)};
        return r.normalized();
    }
    const double half = std::acos(cos_half);
    const double s = std::sin(half);
    const double wa = std::sin((1.0 - t) * half) / s;
    const double wb = std::sin(t * half) / s;
    return Quaternion{wa * a.w + wb * b.w, wa * a.x + wb * b.x, wa * a.y + wb * b.y,
                      wa * a.z + wb * b.z}
        .normalized();
}

/// Rigid transform plus timestamp. Applies as R * p + t.
struct Pose {
    Point3 translation{};
    Quaternion rotation{};
    double timestamp = 0.0;

    Point3 apply(const Point3& p) const { return rotation.rotate(p) + translation; }

    Pose inverse() const {
        const Quaternion r = rotation.conjugate();
        const Point3 t = r.rotate(translation);
        return {{-t.x, -t.y, -t.z}, r, timestamp};
    }

    /// this ∘ other: applies `other` first.
    Pose compose(const Pose& other) const {
        return {apply(other.translation), (rotation * other.rotation).normalized(), timestamp};
    }
};

inline Point3 transform_point(const Pose& pose, const Point3& p) { return pose.apply(p); }

/// Plane {p : normal . p + d = 0} with |normal| = 1.
struct PlaneModel {
    Vec3 normal{0, 0, 1};
    double d = 0.0;
    int inlier_count = 0;
};

/// Signed distance, positive on the side the normal points toward.
inline double point_plane_distance(const PlaneModel& plane, const Point3& p) {
    return dot(plane.normal, p) + plane.d;
}

inline double deg_to_rad(double deg) { return deg * 0.017453292519943295; }
inline double rad_to_deg(double rad) { return rad * 57.29577951308232; }

}  // namespace ffmap
