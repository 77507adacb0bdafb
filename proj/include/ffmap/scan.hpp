#pragma once

#include <cstdint>
#include <vector>

#include "ffmap/geometry.hpp"

namespace ffmap {

/// Single return in the raw sensor frame. The sensor spins about its own
/// y axis; ring indexes the emitter, 0 .. n_beams-1.
struct RawPoint {
    Point3 position{};
    std::uint16_t ring = 0;
};

/// One frame of the vertically mounted scanner.
struct OrganizedScan {
    std::vector<RawPoint> points;
    int n_beams = 32;
    Pose sensor_to_robot{};  // raw sensor frame -> gravity-aligned robot frame
    double timestamp = 0.0;
};

/// Half of one emitter ring, resampled to a fixed length and expressed in
/// the robot frame, sorted by descending z. `source` maps each entry back
/// to the index of the originating point in the frame.
struct PointLine {
    std::vector<Point3> points;
    std::vector<std::uint32_t> source;
    int ring = 0;
    int side = 0;  // 0: sensor-frame azimuth in [0, pi), 1: otherwise
    double beam_angle = 0.0;
};

}  // namespace ffmap
