#include "ffmap/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <thread>

#include "ffmap/detail/random.hpp"
#include "ffmap/errors.hpp"
#include "ffmap/io/pgm.hpp"
#include "ffmap/io/ply.hpp"
#include "ffmap/io/trajectory.hpp"
#include "ffmap/rearrange.hpp"

namespace fs = std::filesystem;

namespace ffmap {

FrameResult classify_frame(const OrganizedScan& scan, const PipelineConfig& config,
                           std::size_t frame_index) {
    const std::uint64_t frame_seed = detail::mix_seed(config.seed, frame_index);
    const auto start = std::chrono::steady_clock::now();

    RearrangedFrame frame = rearrange_frame(scan, config.rearrange_params(), frame_seed);
    WallParams wall_params = config.wall_params();
    if (frame.ceiling_plane && std::abs(frame.ceiling_plane->normal.z) > 0.5) {
        const double ceiling_h = -frame.ceiling_plane->d / frame.ceiling_plane->normal.z;
        wall_params.min_top_z = 0.6 * ceiling_h;
    }
    const std::vector<WallPlane> walls =
        grow_wall_planes(frame.lines, wall_params, detail::mix_seed(frame_seed, 1));
    const std::vector<DoorDetection> doors =
        detect_doors(frame.lines, walls, config.door_params());
    FrameLabeling labeling = label_frame(frame, walls, doors, config.label_params());

    const auto stop = std::chrono::steady_clock::now();

    FrameResult result;
    result.cloud = std::move(labeling.cloud);
    result.walls = walls;
    result.doors = doors;
    result.door_anchors = std::move(labeling.door_anchors);
    if (frame.ceiling_plane) {
        // Height of a horizontal plane n.p + d = 0 with n.z ~ 1.
        result.ceiling_height = -frame.ceiling_plane->d / frame.ceiling_plane->normal.z;
    }
    result.classify_ms =
        std::chrono::duration<double, std::milli>(stop - start).count();
    result.raw_points = scan.points.size();
    result.line_points = frame.remainder.size();
    result.timestamp = scan.timestamp;
    return result;
}

TimingStats timing_stats(std::span<const double> samples) {
    TimingStats s;
    s.count = samples.size();
    if (samples.empty()) return s;
    double sum = 0.0;
    s.min = samples[0];
    s.max = samples[0];
    for (double v : samples) {
        sum += v;
        s.min = std::min(s.min, v);
        s.max = std::max(s.max, v);
    }
    s.average = sum / static_cast<double>(samples.size());
    double sq = 0.0;
    for (double v : samples) sq += (v - s.average) * (v - s.average);
    s.stddev = samples.size() > 1 ? std::sqrt(sq / static_cast<double>(samples.size() - 1)) : 0.0;
    return s;
}

std::vector<std::string> list_frame_files(const std::string& dir) {
    std::vector<std::string> paths;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (entry.is_regular_file() && entry.path().extension() == ".ply")
            paths.push_back(entry.path().string());
    }
    std::sort(paths.begin(), paths.end());
    return paths;
}

namespace {

struct FrameSlot {
    bool ok = false;
    FrameResult result;
    LabeledCloud truth;  // only when evaluating
};

void write_timing_report(const std::string& path, const TimingStats& classify,
                         const TimingStats& raw_points, const TimingStats& line_points) {
    std::ofstream out(path);
    if (!out) throw ParseError(path, "cannot open file for writing");
    char buf[256];
    out << "metric\taverage\tstd\tmin\tmax\n";
    std::snprintf(buf, sizeof buf, "classify_ms\t%.3f\t%.3f\t%.3f\t%.3f\n", classify.average,
                  classify.stddev, classify.min, classify.max);
    out << buf;
    std::snprintf(buf, sizeof buf, "points_in_cloud\t%.1f\t%.1f\t%.0f\t%.0f\n",
                  raw_points.average, raw_points.stddev, raw_points.min, raw_points.max);
    out << buf;
    std::snprintf(buf, sizeof buf, "points_in_lines\t%.1f\t%.1f\t%.0f\t%.0f\n",
                  line_points.average, line_points.stddev, line_points.min, line_points.max);
    out << buf;
}

}  // namespace

RunResult run_pipeline(const PipelineConfig& config, const RunInputs& inputs) {
    validate_config(config);
    const Trajectory trajectory = read_trajectory(inputs.trajectory_path);
    fs::create_directories(inputs.output_dir);

    const std::size_t n_frames = inputs.frame_paths.size();
    std::vector<FrameSlot> slots(n_frames);
    const Pose extrinsic = config.sensor_to_robot();

    auto process_frame = [&](std::size_t i) {
        try {
            const PlyCloud ply = read_ply(inputs.frame_paths[i]);
            OrganizedScan scan = scan_from_ply(ply, config.n_beams, extrinsic);
            FrameSlot& slot = slots[i];
            slot.result = classify_frame(scan, config, i);
            if (inputs.evaluate_truth) {
                if (!ply.labels) {
                    std::cerr << "warning: " << inputs.frame_paths[i]
                              << " has no label property; skipping truth for this frame\n";
                } else {
                    slot.truth.points = slot.result.cloud.points;
                    slot.truth.labels = *ply.labels;
                    slot.truth.frame = FrameId::Robot;
                    slot.truth.timestamp = scan.timestamp;
                }
            }
            slot.ok = true;
        } catch (const std::exception& e) {
            std::cerr << "warning: skipping frame " << inputs.frame_paths[i] << ": " << e.what()
                      << "\n";
        }
    };

    const int jobs = std::max(1, inputs.jobs);
    if (jobs == 1 || n_frames <= 1) {
        for (std::size_t i = 0; i < n_frames; ++i) process_frame(i);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> workers;
        const int worker_count = std::min<std::size_t>(jobs, n_frames);
        workers.reserve(worker_count);
        for (int w = 0; w < worker_count; ++w) {
            workers.emplace_back([&] {
                for (;;) {
                    const std::size_t i = next.fetch_add(1);
                    if (i >= n_frames) return;
                    process_frame(i);
                }
            });
        }
        for (auto& t : workers) t.join();
    }

    RunResult result;
    result.frames_total = n_frames;

    std::vector<LabeledCloud> clouds;
    std::vector<LabeledCloud> truth_clouds;
    std::vector<double> classify_ms, raw_counts, line_counts;
    std::vector<Point3> anchors_robot;
    std::vector<double> ceiling_heights;
    std::vector<std::pair<double, std::size_t>> anchor_frames;  // timestamp, count

    for (std::size_t i = 0; i < n_frames; ++i) {
        FrameSlot& slot = slots[i];
        if (!slot.ok) continue;
        ++result.frames_classified;
        classify_ms.push_back(slot.result.classify_ms);
        raw_counts.push_back(static_cast<double>(slot.result.raw_points));
        line_counts.push_back(static_cast<double>(slot.result.line_points));
        if (slot.result.ceiling_height) ceiling_heights.push_back(*slot.result.ceiling_height);
        clouds.push_back(std::move(slot.result.cloud));
        if (inputs.evaluate_truth && !slot.truth.labels.empty())
            truth_clouds.push_back(std::move(slot.truth));
        anchor_frames.emplace_back(slot.result.timestamp, slot.result.door_anchors.size());
        anchors_robot.insert(anchors_robot.end(), slot.result.door_anchors.begin(),
                             slot.result.door_anchors.end());
    }

    result.timing = timing_stats(classify_ms);
    if (!ceiling_heights.empty()) {
        std::sort(ceiling_heights.begin(), ceiling_heights.end());
        result.ceiling_height = ceiling_heights[ceiling_heights.size() / 2];
    }

    FuseStats fuse_stats;
    LabeledCloud world = fuse_frames(clouds, trajectory, &fuse_stats);
    result.frames_fused = fuse_stats.fused_frames;
    result.frames_skipped = (n_frames - result.frames_classified) + fuse_stats.skipped_frames;

    // Door anchors follow their frame's pose; frames outside the
    // trajectory span were already dropped above.
    std::vector<Point3> anchors_world;
    anchors_world.reserve(anchors_robot.size());
    {
        std::size_t offset = 0;
        for (const auto& [t, count] : anchor_frames) {
            try {
                const Pose pose = interpolate_pose(trajectory, t);
                for (std::size_t k = 0; k < count; ++k)
                    anchors_world.push_back(pose.apply(anchors_robot[offset + k]));
            } catch (const TimestampOutOfRange&) {
            }
            offset += count;
        }
    }

    if (world.points.empty()) {
        std::cerr << "warning: no frames could be fused; writing no artifacts\n";
        return result;
    }

    result.labeled_cloud_path = (fs::path(inputs.output_dir) / "labeled.ply").string();
    write_labeled_ply(result.labeled_cloud_path, world);

    result.furniture_free_grid_base =
        (fs::path(inputs.output_dir) / "map_furniture_free").string();
    const OccupancyGrid free_grid =
        build_furniture_free_grid(world, config.resolution, config.min_hits, anchors_world);
    write_grid(result.furniture_free_grid_base, free_grid);

    const double ceiling_h = result.ceiling_height.value_or(config.min_height);
    result.below_ceiling_grid_base = (fs::path(inputs.output_dir) / "map_below_ceiling").string();
    write_grid(result.below_ceiling_grid_base,
               build_slice_grid(world.points,
                                SliceMode::below_ceiling(config.slice_below_a,
                                                         config.slice_below_b, ceiling_h),
                                config.resolution));

    result.mid_slice_grid_base = (fs::path(inputs.output_dir) / "map_mid_slice").string();
    write_grid(result.mid_slice_grid_base,
               build_slice_grid(world.points,
                                SliceMode::mid_height(config.slice_mid_lo, config.slice_mid_hi),
                                config.resolution));

    result.timing_path = (fs::path(inputs.output_dir) / "timing.txt").string();
    write_timing_report(result.timing_path, result.timing, timing_stats(raw_counts),
                        timing_stats(line_counts));

    if (inputs.evaluate_truth && !truth_clouds.empty() &&
        truth_clouds.size() == clouds.size()) {
        const LabeledCloud truth_world = fuse_frames(truth_clouds, trajectory);
        write_labeled_ply((fs::path(inputs.output_dir) / "truth.ply").string(), truth_world);
        result.metrics = metrics(world, truth_world, 1e-6);
        result.metrics_path = (fs::path(inputs.output_dir) / "metrics.tsv").string();
        std::ofstream out(result.metrics_path);
        write_metrics_tsv(out, result.metrics);
    } else if (inputs.evaluate_truth) {
        std::cerr << "warning: truth labels missing for some frames; metrics not written\n";
    }
    return result;
}

}  // namespace ffmap
