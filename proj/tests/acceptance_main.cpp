// Acceptance suite: eight end-to-end criteria over the room + corridor
// oracle scene. Each criterion prints one PASS/FAIL line; the process
// exits nonzero when any criterion fails.
//
// Usage: acceptance_tests <scene_file> <ffmap_cli> [workdir]

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdarg>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <vector>

#include "ffmap/evaluate.hpp"
#include "ffmap/io/pgm.hpp"
#include "ffmap/io/ply.hpp"
#include "ffmap/io/trajectory.hpp"
#include "ffmap/pipeline.hpp"
#include "ffmap/simulate.hpp"
#include "ffmap/walls.hpp"

namespace fs = std::filesystem;
using namespace ffmap;

namespace {

struct Criterion {
    int number;
    bool passed;
    std::string detail;
};

std::vector<Criterion> g_results;

void report(int number, bool passed, const std::string& detail) {
    g_results.push_back({number, passed, detail});
}

struct OracleRun {
    std::vector<SimFrame> sims;
    Trajectory trajectory;
    std::vector<FrameResult> frames;   // classified, robot frame
    LabeledCloud pred_world;
    LabeledCloud truth_world;
    std::vector<Point3> anchors_world;
    std::vector<LabelMetrics> metrics;
};

OracleRun run_oracle(const SceneFile& file, double noise, std::uint64_t seed) {
    SceneFile scene = file;
    scene.sensor.noise_sigma = noise;
    OracleRun run;
    run.sims = trajectory_through(scene.scene, scene.sensor, scene.waypoints, scene.frame_count,
                                  seed);
    run.trajectory = trajectory_of(run.sims);

    std::vector<LabeledCloud> pred_frames, truth_frames;
    const PipelineConfig config;
    for (std::size_t i = 0; i < run.sims.size(); ++i) {
        FrameResult result = classify_frame(run.sims[i].scan, config, i);
        LabeledCloud truth;
        truth.points = result.cloud.points;
        truth.labels = run.sims[i].truth;
        truth.timestamp = result.cloud.timestamp;
        pred_frames.push_back(result.cloud);
        truth_frames.push_back(std::move(truth));
        const Pose pose = interpolate_pose(run.trajectory, result.timestamp);
        for (const Point3& a : result.door_anchors) run.anchors_world.push_back(pose.apply(a));
        run.frames.push_back(std::move(result));
    }
    run.pred_world = fuse_frames(pred_frames, run.trajectory);
    run.truth_world = fuse_frames(truth_frames, run.trajectory);
    run.metrics = metrics(run.pred_world, run.truth_world, 1e-6);
    return run;
}

const LabelMetrics& wall_row(const OracleRun& run) {
    return run.metrics[static_cast<int>(Label::Wall)];
}

std::string fmt(const char* format, ...) {
    char buf[512];
    va_list args;
    va_start(args, format);
    std::vsnprintf(buf, sizeof buf, format, args);
    va_end(args);
    return buf;
}

// ---------------------------------------------------------------------------
// Scene ground-truth helpers (room_corridor geometry).

struct DoorTruth {
    DoorKind kind;
    double lintel;
    // Dilated rectangle for matching detections to this door.
    double min_x, max_x, min_y, max_y;
    // Strict opening rectangle for traversability checks.
    double span_min_x, span_max_x, span_min_y, span_max_y;
};

std::vector<DoorTruth> door_truths(const SceneFile& file) {
    std::vector<DoorTruth> out;
    for (const DoorSpec& door : file.scene.doors) {
        const WallSegment& wall = file.scene.walls[static_cast<std::size_t>(door.wall)];
        const double len = wall.length();
        const double ux = (wall.to.x - wall.from.x) / len;
        const double uy = (wall.to.y - wall.from.y) / len;
        const double margin = 0.30;
        const Point2 a{wall.from.x + ux * (door.offset - margin),
                       wall.from.y + uy * (door.offset - margin)};
        const Point2 b{wall.from.x + ux * (door.offset + door.width + margin),
                       wall.from.y + uy * (door.offset + door.width + margin)};
        DoorTruth t;
        t.kind = door.kind;
        t.lintel = door.lintel;
        t.min_x = std::min(a.x, b.x) - 0.5 * wall.thickness - 0.1;
        t.max_x = std::max(a.x, b.x) + 0.5 * wall.thickness + 0.1;
        t.min_y = std::min(a.y, b.y) - 0.5 * wall.thickness - 0.1;
        t.max_y = std::max(a.y, b.y) + 0.5 * wall.thickness + 0.1;
        const Point2 sa{wall.from.x + ux * (door.offset + 0.03),
                        wall.from.y + uy * (door.offset + 0.03)};
        const Point2 sb{wall.from.x + ux * (door.offset + door.width - 0.03),
                        wall.from.y + uy * (door.offset + door.width - 0.03)};
        // Pad across the wall only; the along-wall extent stays inset.
        const double pad = 0.5 * wall.thickness + 0.03;
        const double nx = std::abs(uy), ny = std::abs(ux);
        t.span_min_x = std::min(sa.x, sb.x) - pad * nx;
        t.span_max_x = std::max(sa.x, sb.x) + pad * nx;
        t.span_min_y = std::min(sa.y, sb.y) - pad * ny;
        t.span_max_y = std::max(sa.y, sb.y) + pad * ny;
        out.push_back(t);
    }
    return out;
}

/// World anchor of a door detection.
bool detection_anchor(const OracleRun& run, std::size_t frame_idx, const DoorDetection& det,
                      Point3& out) {
    const Pose pose = interpolate_pose(run.trajectory, run.frames[frame_idx].timestamp);
    out = pose.apply(det.anchor);
    return true;
}

std::string file_bytes(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) return "<missing:" + path + ">";
    return std::string(std::istreambuf_iterator<char>(in), {});
}

// ---------------------------------------------------------------------------

void criterion_1_and_2(const SceneFile& file, const OracleRun& clean, const OracleRun& noisy) {
    const LabelMetrics& clean_wall = wall_row(clean);
    const bool c1 = clean_wall.precision >= 0.99 && clean_wall.recall >= 0.90;
    report(1, c1,
           fmt("clean wall area precision %.4f (need >= 0.99), recall %.4f (need >= 0.90)",
               clean_wall.precision, clean_wall.recall));

    const LabelMetrics& noisy_wall = wall_row(noisy);
    bool c2 = noisy_wall.precision >= 0.97 && noisy_wall.recall >= 0.85;
    // No furniture box may contribute more than 0.1 m^2 of false wall area.
    double worst_box = 0.0;
    for (const BoxSpec& box : file.scene.boxes) {
        std::vector<Point3> fp_points;
        const Point3 hi = box.max();
        for (std::size_t i = 0; i < noisy.pred_world.size(); ++i) {
            if (noisy.pred_world.labels[i] != Label::Wall) continue;
            if (noisy.truth_world.labels[i] != Label::Clutter) continue;
            const Point3& p = noisy.pred_world.points[i];
            if (p.x > box.min.x - 0.05 && p.x < hi.x + 0.05 && p.y > box.min.y - 0.05 &&
                p.y < hi.y + 0.05 && p.z < hi.z + 0.05)
                fp_points.push_back(p);
        }
        worst_box = std::max(worst_box, surface_area(fp_points));
    }
    c2 = c2 && worst_box <= 0.1;
    report(2, c2,
           fmt("noisy wall precision %.4f (>= 0.97), recall %.4f (>= 0.85), worst box FP "
               "%.3f m^2 (<= 0.1)",
               noisy_wall.precision, noisy_wall.recall, worst_box));
}

void criterion_3(const SceneFile& file, const OracleRun& clean) {
    const std::vector<DoorTruth> truths = door_truths(file);
    std::vector<std::vector<double>> lintels(truths.size());
    std::vector<std::vector<DoorKind>> kinds(truths.size());
    std::size_t false_doors = 0;

    for (std::size_t fi = 0; fi < clean.frames.size(); ++fi) {
        for (const DoorDetection& det : clean.frames[fi].doors) {
            Point3 anchor;
            if (!detection_anchor(clean, fi, det, anchor)) continue;
            bool matched = false;
            for (std::size_t t = 0; t < truths.size(); ++t) {
                const DoorTruth& truth = truths[t];
                if (anchor.x >= truth.min_x && anchor.x <= truth.max_x && anchor.y >= truth.min_y &&
                    anchor.y <= truth.max_y) {
                    lintels[t].push_back(det.lintel_z);
                    kinds[t].push_back(det.kind);
                    matched = true;
                    break;
                }
            }
            if (!matched) ++false_doors;
        }
    }

    bool pass = false_doors == 0;
    std::ostringstream detail;
    detail << false_doors << " false door detections (need 0)";
    for (std::size_t t = 0; t < truths.size(); ++t) {
        const char* kind_name = truths[t].kind == DoorKind::Open ? "open" : "closed";
        if (lintels[t].empty()) {
            pass = false;
            detail << "; " << kind_name << " door missed";
            continue;
        }
        std::sort(lintels[t].begin(), lintels[t].end());
        const double median = lintels[t][lintels[t].size() / 2];
        std::size_t kind_hits = 0;
        for (DoorKind k : kinds[t])
            if (k == truths[t].kind) ++kind_hits;
        const bool kind_ok = 2 * kind_hits > kinds[t].size();
        const bool lintel_ok = std::abs(median - truths[t].lintel) <= 0.05;
        pass = pass && kind_ok && lintel_ok;
        detail << "; " << kind_name << ": " << lintels[t].size() << " detections, median lintel "
               << fmt("%.3f", median) << " (true " << fmt("%.2f", truths[t].lintel) << ")"
               << (kind_ok ? "" : ", kind wrong");
    }
    report(3, pass, detail.str());
}

void criterion_4(const SceneFile& file, const OracleRun& clean) {
    const OccupancyGrid grid =
        build_furniture_free_grid(clean.pred_world, 0.05, 3, clean.anchors_world);

    // (a) No occupied cell strictly inside a furniture footprint.
    std::size_t furniture_occupied = 0;
    for (const BoxSpec& box : file.scene.boxes) {
        const Point3 hi = box.max();
        for (int iy = 0; iy < grid.height; ++iy) {
            for (int ix = 0; ix < grid.width; ++ix) {
                if (grid.at(ix, iy) != CellState::Occupied) continue;
                const double cx = grid.origin_x + (ix + 0.5) * grid.resolution;
                const double cy = grid.origin_y + (iy + 0.5) * grid.resolution;
                if (cx > box.min.x + 0.05 && cx < hi.x - 0.05 && cy > box.min.y + 0.05 &&
                    cy < hi.y - 0.05)
                    ++furniture_occupied;
            }
        }
    }

    // (b) Coverage: >= 95% of ground-truth wall centerline cells have an
    // occupied cell within a 2-cell dilation. Door spans excluded.
    std::size_t wall_cells = 0, covered = 0;
    for (std::size_t wi = 0; wi < file.scene.walls.size(); ++wi) {
        const WallSegment& wall = file.scene.walls[wi];
        const double len = wall.length();
        const double ux = (wall.to.x - wall.from.x) / len;
        const double uy = (wall.to.y - wall.from.y) / len;
        for (double u = 0.025; u < len; u += 0.05) {
            bool in_door = false;
            for (const DoorSpec& door : file.scene.doors) {
                if (door.wall == static_cast<int>(wi) && u > door.offset - 0.05 &&
                    u < door.offset + door.width + 0.05)
                    in_door = true;
            }
            if (in_door) continue;
            const double wx = wall.from.x + ux * u;
            const double wy = wall.from.y + uy * u;
            const int ix = grid.cell_x(wx);
            const int iy = grid.cell_y(wy);
            ++wall_cells;
            bool hit = false;
            for (int dy = -2; dy <= 2 && !hit; ++dy) {
                for (int dx = -2; dx <= 2 && !hit; ++dx) {
                    if (grid.contains(ix + dx, iy + dy) &&
                        grid.at(ix + dx, iy + dy) == CellState::Occupied)
                        hit = true;
                }
            }
            if (hit) ++covered;
        }
    }
    const double coverage = static_cast<double>(covered) / static_cast<double>(wall_cells);

    // (c) Both doorway spans free in the furniture-free grid.
    std::size_t doorway_blocked = 0;
    const std::vector<DoorTruth> truths = door_truths(file);
    auto doorway_occupied = [&](const OccupancyGrid& g, const DoorTruth& t) {
        std::size_t blocked = 0;
        for (int iy = g.cell_y(t.span_min_y); iy <= g.cell_y(t.span_max_y); ++iy) {
            for (int ix = g.cell_x(t.span_min_x); ix <= g.cell_x(t.span_max_x); ++ix) {
                if (g.contains(ix, iy) && g.at(ix, iy) == CellState::Occupied) ++blocked;
            }
        }
        return blocked;
    };
    for (const DoorTruth& t : truths) doorway_blocked += doorway_occupied(grid, t);

    // (d) Baselines: the mid-height slice keeps furniture, the
    // below-ceiling slice blocks the closed doorway.
    double ceiling_h = 0.0;
    {
        std::vector<double> heights;
        for (const FrameResult& f : clean.frames)
            if (f.ceiling_height) heights.push_back(*f.ceiling_height);
        std::sort(heights.begin(), heights.end());
        ceiling_h = heights.empty() ? file.scene.ceiling_height : heights[heights.size() / 2];
    }
    const OccupancyGrid mid =
        build_slice_grid(clean.pred_world.points, SliceMode::mid_height(0.5, 1.5), 0.05);
    std::size_t boxes_seen = 0;
    for (const BoxSpec& box : file.scene.boxes) {
        const Point3 hi = box.max();
        bool any = false;
        for (int iy = mid.cell_y(box.min.y); iy <= mid.cell_y(hi.y) && !any; ++iy) {
            for (int ix = mid.cell_x(box.min.x); ix <= mid.cell_x(hi.x) && !any; ++ix) {
                if (mid.contains(ix, iy) && mid.at(ix, iy) == CellState::Occupied) any = true;
            }
        }
        if (any) ++boxes_seen;
    }
    const OccupancyGrid below = build_slice_grid(
        clean.pred_world.points, SliceMode::below_ceiling(0.5, 0.6, ceiling_h), 0.05);
    std::size_t closed_blocked = 0;
    for (const DoorTruth& t : truths) {
        if (t.kind == DoorKind::Closed) closed_blocked = doorway_occupied(below, t);
    }

    const bool pass = furniture_occupied == 0 && coverage >= 0.95 && doorway_blocked == 0 &&
                      boxes_seen == file.scene.boxes.size() && closed_blocked > 0;
    report(4, pass,
           fmt("furniture cells occupied %zu (need 0); wall coverage %.1f%% (>= 95); doorway "
               "cells occupied %zu (need 0); mid-slice sees %zu/%zu boxes; below-ceiling blocks "
               "closed door with %zu cells (need > 0)",
               furniture_occupied, 100.0 * coverage, doorway_blocked, boxes_seen,
               file.scene.boxes.size(), closed_blocked));
}

void criterion_5() {
    const LabelMetrics row = metrics_from_areas(Label::Wall, 703.24, 2.80, 34.99);
    const bool precision_ok = std::abs(row.precision - 0.9960) <= 1e-4;
    const bool recall_ok = std::abs(row.recall - 0.9526) <= 1e-4;
    const bool f1_ok = std::abs(row.f1 - 0.9737) <= 1e-4;

    // Independent brute-force confusion computation on random tiny
    // labelings must agree exactly.
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::uniform_int_distribution<int> pick(0, kLabelCount - 1);
    bool brute_ok = true;
    for (int trial = 0; trial < 20 && brute_ok; ++trial) {
        LabeledCloud pred, truth;
        for (int i = 0; i < 10 + trial; ++i) {
            const Point3 p{u(rng), u(rng), u(rng)};
            pred.points.push_back(p);
            truth.points.push_back(p);
            pred.labels.push_back(static_cast<Label>(pick(rng)));
            truth.labels.push_back(static_cast<Label>(pick(rng)));
        }
        const auto fast = metrics(pred, truth);
        for (int l = 0; l < kLabelCount; ++l) {
            const Label label = static_cast<Label>(l);
            std::set<std::tuple<long, long, long>> tp, fp, fn;
            for (std::size_t i = 0; i < pred.size(); ++i) {
                const auto v = std::make_tuple(
                    static_cast<long>(std::floor(pred.points[i].x / 0.05)),
                    static_cast<long>(std::floor(pred.points[i].y / 0.05)),
                    static_cast<long>(std::floor(pred.points[i].z / 0.05)));
                if (pred.labels[i] == label && truth.labels[i] == label) tp.insert(v);
                else if (pred.labels[i] == label) fp.insert(v);
                else if (truth.labels[i] == label) fn.insert(v);
            }
            const auto area = [](std::size_t n) { return static_cast<double>(n) * 0.05 * 0.05; };
            if (fast[l].tp_area != area(tp.size()) || fast[l].fp_area != area(fp.size()) ||
                fast[l].fn_area != area(fn.size()))
                brute_ok = false;
        }
    }

    report(5, precision_ok && recall_ok && f1_ok && brute_ok,
           fmt("precision %.6f vs 0.9960+-1e-4 (%s), recall %.6f vs 0.9526+-1e-4 (%s), f1 %.6f "
               "vs 0.9737+-1e-4 (%s: 2pr/(p+r) of these inputs is 0.973835, the published table "
               "value is off by 1.4e-4 from its own entries), brute-force equality %s",
               row.precision, precision_ok ? "ok" : "FAIL", row.recall, recall_ok ? "ok" : "FAIL",
               row.f1, f1_ok ? "ok" : "FAIL", brute_ok ? "ok" : "FAIL"));
}

void criterion_6(const SceneFile& file) {
    bool pass = true;
    std::ostringstream detail;

    // Forward difference vanishes on noise-free vertical lines.
    {
        PointLine line;
        for (int i = 0; i < 120; ++i) {
            line.points.push_back({1.7, -0.4, 2.5 - 0.02 * i});
        }
        double max_d = 0.0;
        for (double d : forward_difference(line)) max_d = std::max(max_d, d);
        if (max_d != 0.0) {
            pass = false;
            detail << "forward difference nonzero on a vertical line; ";
        }
    }
    // min_points boundary: 9 compliant points rejected, 10 accepted.
    {
        PointLine line;
        for (int i = 0; i < 30; ++i) line.points.push_back({2.0, 0.0, 3.0 - 0.02 * i});
        std::vector<double> diffs(29, 10.0);
        std::fill(diffs.begin() + 4, diffs.begin() + 12, 0.0);  // 9 points
        const bool nine = detect_vertical_structures(line, diffs, 1.0, 10).empty();
        diffs[12] = 0.0;  // 10 points
        const auto segs = detect_vertical_structures(line, diffs, 1.0, 10);
        const bool ten = segs.size() == 1 && segs[0].point_count() == 10;
        if (!nine || !ten) {
            pass = false;
            detail << "min_points boundary misbehaves; ";
        }
    }
    // RANSAC within 1 degree under 20% outliers.
    {
        std::mt19937_64 rng(55);
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        std::vector<Point3> pts;
        for (int i = 0; i < 100; ++i) pts.push_back({u(rng), u(rng), 1.0});
        for (int i = 0; i < 20; ++i) pts.push_back({u(rng), u(rng), 1.0 + 2.0 * u(rng)});
        const PlaneModel plane = fit_plane_ransac(pts, 0.02, 200, 7);
        if (std::abs(plane.normal.z) < std::cos(deg_to_rad(1.0))) {
            pass = false;
            detail << "ransac normal off by more than 1 degree; ";
        }
    }
    // Rigid transforms preserve distances to 1e-9.
    {
        std::mt19937_64 rng(56);
        std::uniform_real_distribution<double> u(-5.0, 5.0);
        for (int i = 0; i < 50; ++i) {
            Pose pose;
            pose.translation = {u(rng), u(rng), u(rng)};
            pose.rotation = Quaternion{u(rng) + 6.0, u(rng), u(rng), u(rng)}.normalized();
            const Point3 a{u(rng), u(rng), u(rng)};
            const Point3 b{u(rng), u(rng), u(rng)};
            if (std::abs(norm(pose.apply(a) - pose.apply(b)) - norm(a - b)) >= 1e-9) {
                pass = false;
                detail << "rigid transform distance drift; ";
                break;
            }
        }
    }
    // Determinism of the full per-frame classification under a fixed seed.
    {
        Pose pose;
        pose.translation = {4.5, 3.0, 0.0};
        const SimFrame sim = simulate_frame(file.scene, file.sensor, pose, 11);
        const PipelineConfig config;
        const FrameResult a = classify_frame(sim.scan, config, 4);
        const FrameResult b = classify_frame(sim.scan, config, 4);
        bool same = a.cloud.labels == b.cloud.labels && a.walls.size() == b.walls.size() &&
                    a.doors.size() == b.doors.size();
        for (std::size_t w = 0; same && w < a.walls.size(); ++w)
            same = a.walls[w].model.d == b.walls[w].model.d &&
                   a.walls[w].member_lines == b.walls[w].member_lines;
        if (!same) {
            pass = false;
            detail << "classification not deterministic; ";
        }
    }
    report(6, pass, pass ? "forward difference, min_points boundary, ransac tilt, rigidity and "
                           "determinism all hold"
                         : detail.str());
}

void criterion_7(const SceneFile& file) {
    SensorSpec sensor = file.sensor;
    sensor.azimuth_steps = 3000;  // 32 x 3000 = 96k rays
    Pose pose;
    pose.translation = {4.5, 3.0, 0.0};
    const SimFrame sim = simulate_frame(file.scene, sensor, pose, 21);
    const PipelineConfig config;

    std::vector<double> times;
    classify_frame(sim.scan, config, 0);  // warm-up
    for (int i = 0; i < 5; ++i) {
        const auto start = std::chrono::steady_clock::now();
        const FrameResult result = classify_frame(sim.scan, config, 0);
        const auto stop = std::chrono::steady_clock::now();
        times.push_back(std::chrono::duration<double, std::milli>(stop - start).count());
        (void)result;
    }
    std::sort(times.begin(), times.end());
    const double median = times[times.size() / 2];
    report(7, median <= 200.0,
           fmt("per-frame classification of a %zu-point frame: median %.1f ms over 5 runs, "
               "single thread (need <= 200 ms)",
               sim.scan.points.size(), median));
}

void criterion_8(const SceneFile& file, const fs::path& workdir, const std::string& cli) {
    // Small recorded dataset for the command-line determinism check.
    const fs::path data = workdir / "determinism";
    fs::remove_all(data);
    fs::create_directories(data / "frames");
    SceneFile scene = file;
    scene.sensor.azimuth_steps = 900;
    const auto sims = trajectory_through(scene.scene, scene.sensor, scene.waypoints, 8, 17);
    char name[32];
    for (std::size_t i = 0; i < sims.size(); ++i) {
        std::snprintf(name, sizeof name, "%06zu.ply", i);
        write_frame_ply((data / "frames" / name).string(), sims[i].scan, &sims[i].truth);
    }
    write_trajectory((data / "trajectory.txt").string(), trajectory_of(sims));

    auto run_cli = [&](const std::string& out, int jobs) {
        std::ostringstream cmd;
        cmd << "'" << cli << "' run --frames '" << (data / "frames").string()
            << "' --trajectory '" << (data / "trajectory.txt").string() << "' --out '"
            << (data / out).string() << "' --jobs " << jobs << " > /dev/null 2>&1";
        return std::system(cmd.str().c_str());
    };
    const int r1 = run_cli("a", 1);
    const int r2 = run_cli("b", 1);
    const int r3 = run_cli("c", 8);

    bool pass = r1 == 0 && r2 == 0 && r3 == 0;
    std::string mismatch;
    for (const char* artifact :
         {"labeled.ply", "map_furniture_free.pgm", "map_furniture_free.yaml",
          "map_below_ceiling.pgm", "map_mid_slice.pgm"}) {
        const std::string a = file_bytes((data / "a" / artifact).string());
        const std::string b = file_bytes((data / "b" / artifact).string());
        const std::string c = file_bytes((data / "c" / artifact).string());
        if (a.empty() || a != b || a != c) {
            pass = false;
            mismatch += std::string(" ") + artifact;
        }
    }
    report(8, pass,
           pass ? "two --jobs 1 runs and one --jobs 8 run wrote byte-identical clouds and grids"
                : fmt("CLI exits %d/%d/%d; differing artifacts:%s", r1, r2, r3,
                      mismatch.c_str()));
}

}  // namespace

int main(int argc, char** argv) {
    if (argc < 3) {
        std::cerr << "usage: acceptance_tests <scene_file> <ffmap_cli> [workdir]\n";
        return 2;
    }
    const auto suite_start = std::chrono::steady_clock::now();
    const SceneFile file = load_scene(argv[1]);
    const std::string cli = argv[2];
    const fs::path workdir = argc > 3 ? fs::path(argv[3]) : fs::temp_directory_path() / "ffmap_acceptance";
    fs::create_directories(workdir);

    try {
        const OracleRun clean = run_oracle(file, 0.0, 7);
        const OracleRun noisy = run_oracle(file, 0.01, 7);

        criterion_1_and_2(file, clean, noisy);
        criterion_3(file, clean);
        criterion_4(file, clean);
        criterion_5();
        criterion_6(file);
        criterion_7(file);
        criterion_8(file, workdir, cli);
    } catch (const std::exception& e) {
        std::cerr << "acceptance suite aborted: " << e.what() << "\n";
        return 2;
    }

    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - suite_start).count();
    // The clean-scene scenario carries the suite runtime budget.
    for (Criterion& c : g_results) {
        if (c.number == 1) {
            c.detail += fmt("; suite runtime %.1f s (need < 60)", elapsed);
            c.passed = c.passed && elapsed < 60.0;
        }
    }

    std::sort(g_results.begin(), g_results.end(),
              [](const Criterion& a, const Criterion& b) { return a.number < b.number; });
    int failures = 0;
    for (const Criterion& c : g_results) {
        std::printf("criterion %d: %s - %s\n", c.number, c.passed ? "PASS" : "FAIL",
                    c.detail.c_str());
        if (!c.passed) ++failures;
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(g_results.size()) - failures,
                g_results.size());
    return failures == 0 ? 0 : 1;
}
