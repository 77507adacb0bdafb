#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "ffmap/labeling.hpp"
#include "ffmap/pipeline.hpp"
#include "ffmap/simulate.hpp"
#include "scenes.hpp"

using namespace ffmap;

namespace {

struct ClassifiedFrame {
    SimFrame sim;
    FrameResult result;
};

ClassifiedFrame classify_at(double x, double y, double yaw_deg, std::uint64_t seed = 3) {
    const SceneFile file = ffmap::testing::room_corridor_scene();
    Pose pose;
    pose.translation = {x, y, 0.0};
    pose.rotation = Quaternion::from_yaw(deg_to_rad(yaw_deg));
    ClassifiedFrame out;
    out.sim = simulate_frame(file.scene, file.sensor, pose, seed);
    out.result = classify_frame(out.sim.scan, PipelineConfig{}, seed);
    return out;
}

PointLine synthetic_wall_line(double wall_y, int count = 200, double z_top = 3.0,
                              double z_bottom = 0.1) {
    PointLine line;
    const double step = (z_top - z_bottom) / (count - 1);
    for (int i = 0; i < count; ++i) {
        line.points.push_back({0.0, wall_y, z_top - step * i});
        line.source.push_back(static_cast<std::uint32_t>(i));
    }
    return line;
}

}  // namespace

TEST_SUITE("labeling") {

TEST_CASE("closed door line produces a closed detection with the right lintel") {
    PointLine line = synthetic_wall_line(2.0);
    // Recess everything below z = 2.0 by 4 cm (the closed panel).
    for (auto& p : line.points) {
        if (p.z < 2.0) p.y = 2.04;
    }
    const PlaneModel wall{{0, 1, 0}, -2.0, 0};
    const auto det = classify_door_line(line, wall, DoorParams{});
    REQUIRE(det.has_value());
    CHECK(det->kind == DoorKind::Closed);
    CHECK(std::abs(det->lintel_z - 2.0) < 0.05);
}

TEST_CASE("a line fully on the wall plane is no door") {
    const PointLine line = synthetic_wall_line(2.0);
    const PlaneModel wall{{0, 1, 0}, -2.0, 0};
    CHECK_FALSE(classify_door_line(line, wall, DoorParams{}).has_value());
}

TEST_CASE("a recess starting below h_min is no door") {
    PointLine line = synthetic_wall_line(2.0);
    for (auto& p : line.points) {
        if (p.z < 0.9) p.y = 2.04;
    }
    const PlaneModel wall{{0, 1, 0}, -2.0, 0};
    CHECK_FALSE(classify_door_line(line, wall, DoorParams{}).has_value());
}

TEST_CASE("an occluder in front of the plane blocks the detection") {
    PointLine line = synthetic_wall_line(2.0);
    for (auto& p : line.points) {
        if (p.z < 2.0 && p.z > 1.2) p.y = 1.0;  // furniture in front
        if (p.z <= 1.2) p.y = 2.04;
    }
    const PlaneModel wall{{0, 1, 0}, -2.0, 0};
    CHECK_FALSE(classify_door_line(line, wall, DoorParams{}).has_value());
}

TEST_CASE("a line that stops at the lintel is an open door") {
    PointLine line = synthetic_wall_line(2.0, 60, 3.0, 2.05);
    const PlaneModel wall{{0, 1, 0}, -2.0, 0};
    const auto det = classify_door_line(line, wall, DoorParams{});
    REQUIRE(det.has_value());
    CHECK(det->kind == DoorKind::Open);
    CHECK(std::abs(det->lintel_z - 2.05) < 0.05);
}

TEST_CASE("the oracle closed door is detected with accurate lintels") {
    const ClassifiedFrame frame = classify_at(2.53, 3.0, 0.0);
    std::vector<double> lintels;
    for (const DoorDetection& det : frame.result.doors) {
        if (det.kind == DoorKind::Closed) lintels.push_back(det.lintel_z);
    }
    REQUIRE(lintels.size() >= 3);
    std::sort(lintels.begin(), lintels.end());
    CHECK(std::abs(lintels[lintels.size() / 2] - 2.0) < 0.05);
}

TEST_CASE("the oracle open door is detected from inside the room") {
    const ClassifiedFrame frame = classify_at(7.9, 3.25, 90.0);
    int open = 0;
    for (const DoorDetection& det : frame.result.doors) {
        if (det.kind == DoorKind::Open) ++open;
    }
    CHECK(open >= 2);
}

TEST_CASE("raising delta_door never adds closed-door detections") {
    const SceneFile file = ffmap::testing::room_corridor_scene();
    Pose pose;
    pose.translation = {2.53, 3.0, 0.0};
    const SimFrame sim = simulate_frame(file.scene, file.sensor, pose, 3);

    std::size_t previous = std::numeric_limits<std::size_t>::max();
    for (double delta : {0.01, 0.02, 0.035}) {
        PipelineConfig config;
        config.delta_door = delta;
        const FrameResult result = classify_frame(sim.scan, config, 3);
        std::size_t closed = 0;
        for (const auto& det : result.doors)
            if (det.kind == DoorKind::Closed) ++closed;
        CHECK(closed <= previous);
        previous = closed;
    }
}

TEST_CASE("labeling is a total function over the frame") {
    const ClassifiedFrame frame = classify_at(4.5, 3.0, 0.0);
    CHECK(frame.result.cloud.points.size() == frame.sim.scan.points.size());
    CHECK(frame.result.cloud.labels.size() == frame.sim.scan.points.size());
    std::size_t counts[kLabelCount] = {};
    for (Label l : frame.result.cloud.labels) ++counts[static_cast<int>(l)];
    std::size_t total = 0;
    for (std::size_t c : counts) total += c;
    CHECK(total == frame.sim.scan.points.size());
}

TEST_CASE("per-point agreement on a clean frame") {
    const ClassifiedFrame frame = classify_at(4.5, 3.0, 0.0);
    std::size_t wall_truth = 0, wall_correct = 0;
    std::size_t floor_truth = 0, floor_correct = 0;
    for (std::size_t i = 0; i < frame.sim.truth.size(); ++i) {
        if (frame.sim.truth[i] == Label::Wall) {
            ++wall_truth;
            if (frame.result.cloud.labels[i] == Label::Wall) ++wall_correct;
        } else if (frame.sim.truth[i] == Label::Floor) {
            ++floor_truth;
            if (frame.result.cloud.labels[i] == Label::Floor) ++floor_correct;
        }
    }
    REQUIRE(wall_truth > 1000);
    CHECK(wall_correct >= 0.95 * wall_truth);
    CHECK(floor_correct == floor_truth);
}

TEST_CASE("without wall planes only floor, ceiling and clutter appear") {
    const ClassifiedFrame frame = classify_at(4.5, 3.0, 0.0);
    RearrangedFrame rearranged = rearrange_frame(frame.sim.scan, RearrangeParams{}, 3);
    const FrameLabeling labeling = label_frame(rearranged, {}, {}, LabelParams{});
    for (Label l : labeling.cloud.labels) {
        CHECK(l != Label::Wall);
        CHECK(l != Label::Door);
    }
}

TEST_CASE("no door label without a supporting detection") {
    const ClassifiedFrame frame = classify_at(4.5, 3.0, 0.0);
    for (const DoorDetection& det : frame.result.doors) {
        CHECK(det.wall_index >= 0);
        CHECK(static_cast<std::size_t>(det.wall_index) < frame.result.walls.size());
    }
    if (frame.result.doors.empty()) {
        for (Label l : frame.result.cloud.labels) CHECK(l != Label::Door);
    }
}

}  // TEST_SUITE
