#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "ffmap/geometry.hpp"
#include "ffmap/rearrange.hpp"
#include "ffmap/walls.hpp"

namespace ffmap {

enum class FrameId : std::uint8_t { Robot, World };

struct LabeledCloud {
    std::vector<Point3> points;
    std::vector<Label> labels;
    FrameId frame = FrameId::Robot;
    double timestamp = 0.0;

    std::size_t size() const { return points.size(); }
};

enum class DoorKind : std::uint8_t { Open, Closed };

struct DoorDetection {
    int line_index = 0;
    int wall_index = 0;     // index into the frame's wall plane set
    double lintel_z = 0.0;  // top of the opening
    DoorKind kind = DoorKind::Closed;
    /// On-plane point of the detected line at the lintel.
    Point3 anchor{};
};

struct DoorParams {
    double delta_door = 0.02;  // minimum recess depth, meters
    double h_min = 1.6;        // minimum lintel height, meters
    double wall_band = 0.08;   // on-plane tolerance, meters
    int min_points = 10;       // minimum on-plane evidence above the lintel
};

/// Door rule chain for one wall-member line. Scanning top to bottom, the
/// line must sit on the wall plane, then from some point on every return
/// must lie behind it by more than delta_door (or the returns stop, as
/// through an opening with nothing beyond), and that transition must be at
/// least h_min above the ground. Lines with returns in front of the plane
/// above the transition (occluders) are rejected. Returns within twice the
/// wall band behind the plane count as a recessed panel (closed door);
/// deeper or absent returns mean an open doorway.
std::optional<DoorDetection> classify_door_line(const PointLine& line, const PlaneModel& wall,
                                                const DoorParams& params);

/// Run the door rules over every wall-member line.
std::vector<DoorDetection> detect_doors(std::span<const PointLine> lines,
                                        std::span<const WallPlane> walls,
                                        const DoorParams& params);

struct LabelParams {
    double wall_band = 0.08;
    double z_floor = 0.10;
    double delta_door = 0.02;
};

struct FrameLabeling {
    LabeledCloud cloud;  // robot frame, one label per input point
    /// Door-opening positions projected onto their wall plane, densified
    /// vertically; used by the grid builder to keep doorways open.
    std::vector<Point3> door_anchors;
};

/// Assign final labels: floor and ceiling from the rearrangement, door on
/// detected door lines below their lintel, wall for remaining points
/// within wall_band of a wall plane and above z_floor, clutter otherwise.
FrameLabeling label_frame(const RearrangedFrame& frame, std::span<const WallPlane> walls,
                          std::span<const DoorDetection> doors, const LabelParams& params);

}  // namespace ffmap
