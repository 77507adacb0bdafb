#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ffmap/evaluate.hpp"
#include "ffmap/io/config.hpp"
#include "ffmap/labeling.hpp"
#include "ffmap/mapping.hpp"
#include "ffmap/scan.hpp"
#include "ffmap/walls.hpp"

namespace ffmap {

/// Per-frame classification output, robot frame.
struct FrameResult {
    LabeledCloud cloud;
    std::vector<WallPlane> walls;
    std::vector<DoorDetection> doors;
    std::vector<Point3> door_anchors;
    std::optional<double> ceiling_height;
    double classify_ms = 0.0;
    std::size_t raw_points = 0;
    std::size_t line_points = 0;  // remainder after floor/ceiling removal
    double timestamp = 0.0;
};

/// Rearrangement, wall detection, door rules and labeling for one frame.
/// Deterministic for a fixed (config.seed, frame_index) pair.
FrameResult classify_frame(const OrganizedScan& scan, const PipelineConfig& config,
                           std::size_t frame_index);

struct TimingStats {
    double average = 0.0;
    double stddev = 0.0;
    double min = 0.0;
    double max = 0.0;
    std::size_t count = 0;
};

TimingStats timing_stats(std::span<const double> samples);

struct RunInputs {
    std::vector<std::string> frame_paths;  // PLY files, processed in order
    std::string trajectory_path;
    std::string output_dir;
    int jobs = 1;
    bool evaluate_truth = false;  // use per-frame "label" properties as ground truth
};

struct RunResult {
    std::size_t frames_total = 0;
    std::size_t frames_classified = 0;
    std::size_t frames_fused = 0;
    std::size_t frames_skipped = 0;
    TimingStats timing;
    std::optional<double> ceiling_height;
    std::vector<LabelMetrics> metrics;  // empty unless truth was evaluated
    std::string labeled_cloud_path;
    std::string furniture_free_grid_base;
    std::string below_ceiling_grid_base;
    std::string mid_slice_grid_base;
    std::string metrics_path;
    std::string timing_path;
};

/// Full pipeline over recorded frames: classify (optionally in parallel),
/// fuse with the trajectory, write the labeled cloud, the furniture-free
/// grid, both baseline slice grids, the timing report and, when truth
/// labels are present, the metrics table. Frame-level failures skip the
/// frame with a warning and never abort the run.
RunResult run_pipeline(const PipelineConfig& config, const RunInputs& inputs);

/// Frame files in a directory, sorted by name (timestamp-named files).
std::vector<std::string> list_frame_files(const std::string& dir);

}  // namespace ffmap
