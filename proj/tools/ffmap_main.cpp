#include <CLI11.hpp>
#include <cstdio>
#include <map>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "ffmap/errors.hpp"
#include "ffmap/evaluate.hpp"
#include "ffmap/io/config.hpp"
#include "ffmap/io/pgm.hpp"
#include "ffmap/io/ply.hpp"
#include "ffmap/io/trajectory.hpp"
#include "ffmap/pipeline.hpp"
#include "ffmap/simulate.hpp"

namespace fs = std::filesystem;

namespace {

struct ConfigCli {
    std::string config_path;
    std::map<std::string, std::string> flag_values;  // key -> value

    ffmap::PipelineConfig resolve() const {
        ffmap::PipelineConfig config;
        if (!config_path.empty()) config = ffmap::load_config(config_path);
        for (const auto& [key, value] : flag_values)
            ffmap::apply_config_entry(config, key, value);
        return config;
    }
};

// One flag per config key: --config loads a file, explicit flags override.
void add_config_options(CLI::App* cmd, ConfigCli& cli) {
    cmd->add_option("--config", cli.config_path, "Config file with key = value lines");
    for (const std::string& key : ffmap::config_keys()) {
        cmd->add_option_function<std::string>(
               "--" + key,
               [&cli, key](const std::string& value) { cli.flag_values[key] = value; })
            ->group("Pipeline parameters");
    }
}

int cmd_simulate(const std::string& scene_path, const std::string& out_dir, int frames_override,
                 double noise_override, std::uint64_t seed) {
    ffmap::SceneFile scene = ffmap::load_scene(scene_path);
    if (frames_override > 0) scene.frame_count = frames_override;
    if (noise_override >= 0.0) scene.sensor.noise_sigma = noise_override;
    if (scene.waypoints.empty()) throw ffmap::Error("scene has no waypoints");

    const auto frames = ffmap::trajectory_through(scene.scene, scene.sensor, scene.waypoints,
                                                  scene.frame_count, seed);
    const fs::path frames_dir = fs::path(out_dir) / "frames";
    fs::create_directories(frames_dir);

    char name[64];
    for (std::size_t i = 0; i < frames.size(); ++i) {
        std::snprintf(name, sizeof name, "%06zu.ply", i);
        ffmap::write_frame_ply((frames_dir / name).string(), frames[i].scan, &frames[i].truth);
    }
    ffmap::write_trajectory((fs::path(out_dir) / "trajectory.txt").string(),
                            ffmap::trajectory_of(frames));

    // Config matching the simulated sensor, ready for `run`.
    ffmap::PipelineConfig config;
    config.n_beams = scene.sensor.n_beams;
    config.sensor_tz = scene.sensor.mount_height;
    config.seed = seed;
    std::ofstream cfg((fs::path(out_dir) / "pipeline.cfg").string());
    ffmap::serialize_config(cfg, config);

    std::cout << "wrote " << frames.size() << " frames to " << frames_dir.string() << "\n";
    return 0;
}

int cmd_run(const ConfigCli& cli, const std::string& frames_dir, const std::string& trajectory,
            const std::string& out_dir, int jobs, bool evaluate) {
    const ffmap::PipelineConfig config = cli.resolve();
    ffmap::RunInputs inputs;
    inputs.frame_paths = ffmap::list_frame_files(frames_dir);
    if (inputs.frame_paths.empty()) throw ffmap::Error("no .ply frames in " + frames_dir);
    inputs.trajectory_path = trajectory;
    inputs.output_dir = out_dir;
    inputs.jobs = jobs;
    inputs.evaluate_truth = evaluate;

    const ffmap::RunResult result = ffmap::run_pipeline(config, inputs);
    std::cout << "frames: " << result.frames_classified << "/" << result.frames_total
              << " classified, " << result.frames_fused << " fused, " << result.frames_skipped
              << " skipped\n";
    std::printf("classification ms per frame: average %.1f std %.1f min %.1f max %.1f\n",
                result.timing.average, result.timing.stddev, result.timing.min,
                result.timing.max);
    if (result.ceiling_height)
        std::printf("ceiling height: %.2f m\n", *result.ceiling_height);
    if (!result.metrics.empty()) ffmap::write_metrics_tsv(std::cout, result.metrics);
    if (result.labeled_cloud_path.empty()) {
        std::cerr << "error: no output written\n";
        return 1;
    }
    std::cout << "labeled cloud: " << result.labeled_cloud_path << "\n";
    std::cout << "furniture-free grid: " << result.furniture_free_grid_base << ".pgm\n";
    return 0;
}

int cmd_evaluate(const std::string& pred_path, const std::string& truth_path, double match_tol,
                 const std::string& out_path) {
    const ffmap::PlyCloud pred_ply = ffmap::read_ply(pred_path);
    const ffmap::PlyCloud truth_ply = ffmap::read_ply(truth_path);
    if (!pred_ply.labels) throw ffmap::Error(pred_path + " has no label property");
    if (!truth_ply.labels) throw ffmap::Error(truth_path + " has no label property");

    ffmap::LabeledCloud pred{pred_ply.points, *pred_ply.labels, ffmap::FrameId::World, 0.0};
    ffmap::LabeledCloud truth{truth_ply.points, *truth_ply.labels, ffmap::FrameId::World, 0.0};
    const auto rows = ffmap::metrics(pred, truth, match_tol);
    ffmap::write_metrics_tsv(std::cout, rows);
    if (!out_path.empty()) {
        std::ofstream out(out_path);
        ffmap::write_metrics_tsv(out, rows);
    }
    return 0;
}

int cmd_gridcmp(const std::string& a_path, const std::string& b_path) {
    auto strip = [](std::string s) {
        if (s.size() > 4 && s.substr(s.size() - 4) == ".pgm") s.resize(s.size() - 4);
        return s;
    };
    const ffmap::OccupancyGrid a = ffmap::read_grid(strip(a_path));
    const ffmap::OccupancyGrid b = ffmap::read_grid(strip(b_path));
    if (a.width != b.width || a.height != b.height) {
        std::cerr << "error: grid dimensions differ: " << a.width << "x" << a.height << " vs "
                  << b.width << "x" << b.height << "\n";
        return 2;
    }
    std::size_t same = 0;
    for (std::size_t i = 0; i < a.cells.size(); ++i)
        if (a.cells[i] == b.cells[i]) ++same;
    std::printf("agreement: %.2f%% (%zu/%zu cells)\n",
                100.0 * static_cast<double>(same) / static_cast<double>(a.cells.size()), same,
                a.cells.size());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Furniture-free indoor mapping from a vertical spinning Lidar"};
    app.require_subcommand(1);

    // run
    auto* run = app.add_subcommand("run", "Classify frames, fuse, and write maps");
    ConfigCli run_cfg;
    std::string frames_dir, trajectory, out_dir = "out";
    int jobs = 1;
    bool evaluate = false;
    run->add_option("--frames", frames_dir, "Directory of timestamp-named .ply frames")
        ->required();
    run->add_option("--trajectory", trajectory, "Trajectory text file")->required();
    run->add_option("--out", out_dir, "Output directory");
    run->add_option("--jobs", jobs, "Worker threads for per-frame classification");
    run->add_flag("--evaluate", evaluate,
                  "Treat per-frame 'label' properties as ground truth and write metrics.tsv");
    add_config_options(run, run_cfg);

    // simulate
    auto* sim = app.add_subcommand("simulate", "Render frames and a trajectory from a scene file");
    std::string scene_path, sim_out = "sim";
    int sim_frames = 0;
    double sim_noise = -1.0;
    std::uint64_t sim_seed = 1;
    sim->add_option("--scene", scene_path, "Scene description file")->required();
    sim->add_option("--out", sim_out, "Output directory");
    sim->add_option("--frames", sim_frames, "Override the scene's frame count");
    sim->add_option("--noise", sim_noise, "Override range noise sigma (meters)");
    sim->add_option("--seed", sim_seed, "Simulation seed");

    // evaluate
    auto* eval = app.add_subcommand("evaluate", "Area metrics of a labeled cloud vs ground truth");
    std::string pred_path, truth_path, metrics_out;
    double match_tol = 1e-6;
    eval->add_option("--pred", pred_path, "Predicted labeled .ply")->required();
    eval->add_option("--truth", truth_path, "Ground-truth labeled .ply")->required();
    eval->add_option("--match-tol", match_tol, "Point position match tolerance (meters)");
    eval->add_option("--out", metrics_out, "Also write the table to this file");

    // gridcmp
    auto* cmp = app.add_subcommand("gridcmp", "Cell agreement between two grid maps");
    std::string grid_a, grid_b;
    cmp->add_option("grid_a", grid_a, "First grid (.pgm path or base)")->required();
    cmp->add_option("grid_b", grid_b, "Second grid (.pgm path or base)")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) return cmd_run(run_cfg, frames_dir, trajectory, out_dir, jobs, evaluate);
        if (sim->parsed()) return cmd_simulate(scene_path, sim_out, sim_frames, sim_noise, sim_seed);
        if (eval->parsed()) return cmd_evaluate(pred_path, truth_path, match_tol, metrics_out);
        if (cmp->parsed()) return cmd_gridcmp(grid_a, grid_b);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
