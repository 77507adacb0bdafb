#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <sstream>

#include "ffmap/errors.hpp"
#include "ffmap/evaluate.hpp"
#include "ffmap/io/config.hpp"
#include "ffmap/io/pgm.hpp"
#include "ffmap/io/ply.hpp"
#include "ffmap/io/trajectory.hpp"
#include "ffmap/pipeline.hpp"
#include "ffmap/rearrange.hpp"
#include "ffmap/simulate.hpp"
#include "ffmap/walls.hpp"

namespace fs = std::filesystem;
namespace py = pybind11;
using namespace ffmap;

namespace {

using Xyz = std::array<double, 3>;

Point3 to_point(const Xyz& p) { return {p[0], p[1], p[2]}; }

std::vector<Point3> to_points(const std::vector<Xyz>& pts) {
    std::vector<Point3> out;
    out.reserve(pts.size());
    for (const Xyz& p : pts) out.push_back(to_point(p));
    return out;
}

py::dict metrics_row(const LabelMetrics& m) {
    py::dict row;
    row["label"] = std::string(label_name(m.label));
    row["tp_area"] = m.tp_area;
    row["fp_area"] = m.fp_area;
    row["fn_area"] = m.fn_area;
    row["precision"] = m.precision_defined ? py::object(py::float_(m.precision)) : py::none();
    row["recall"] = m.recall_defined ? py::object(py::float_(m.recall)) : py::none();
    row["f1"] = (m.precision_defined && m.recall_defined) ? py::object(py::float_(m.f1))
                                                          : py::none();
    return row;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Furniture-free indoor mapping from a vertical spinning Lidar";

    py::class_<PipelineConfig>(m, "Config")
        .def(py::init<>())
        .def_readwrite("z_floor", &PipelineConfig::z_floor)
        .def_readwrite("dist_tol", &PipelineConfig::dist_tol)
        .def_readwrite("angle_tol", &PipelineConfig::angle_tol)
        .def_readwrite("min_height", &PipelineConfig::min_height)
        .def_readwrite("resample_count", &PipelineConfig::resample_count)
        .def_readwrite("n_beams", &PipelineConfig::n_beams)
        .def_readwrite("d_threshold", &PipelineConfig::d_threshold)
        .def_readwrite("min_points", &PipelineConfig::min_points)
        .def_readwrite("sigma_th", &PipelineConfig::sigma_th)
        .def_readwrite("min_lines_per_wall", &PipelineConfig::min_lines_per_wall)
        .def_readwrite("vertical_tol", &PipelineConfig::vertical_tol)
        .def_readwrite("delta_door", &PipelineConfig::delta_door)
        .def_readwrite("h_min", &PipelineConfig::h_min)
        .def_readwrite("wall_band", &PipelineConfig::wall_band)
        .def_readwrite("resolution", &PipelineConfig::resolution)
        .def_readwrite("min_hits", &PipelineConfig::min_hits)
        .def_readwrite("seed", &PipelineConfig::seed)
        .def("__repr__", [](const PipelineConfig& c) {
            std::ostringstream out;
            serialize_config(out, c);
            return "Config(\n" + out.str() + ")";
        });

    m.def("beam_angle", [](double x, double y, double z) { return beam_angle({x, y, z}); },
          py::arg("x"), py::arg("y"), py::arg("z"),
          "Angle between a raw sensor-frame return and the spin axis, radians in [0, pi].");

    m.def(
        "transform_point",
        [](const Xyz& translation, const std::array<double, 4>& qxyzw, const Xyz& p) {
            Pose pose;
            pose.translation = to_point(translation);
            pose.rotation =
                Quaternion{qxyzw[3], qxyzw[0], qxyzw[1], qxyzw[2]}.normalized();
            const Point3 out = pose.apply(to_point(p));
            return Xyz{out.x, out.y, out.z};
        },
        py::arg("translation"), py::arg("quaternion_xyzw"), py::arg("point"),
        "Apply a rigid transform, R * p + t.");

    m.def(
        "fit_plane",
        [](const std::vector<Xyz>& pts, double dist_tol, int iterations, std::uint64_t seed) {
            const PlaneModel plane = fit_plane_ransac(to_points(pts), dist_tol, iterations, seed);
            return py::make_tuple(Xyz{plane.normal.x, plane.normal.y, plane.normal.z}, plane.d,
                                  plane.inlier_count);
        },
        py::arg("points"), py::arg("dist_tol") = 0.05, py::arg("iterations") = 200,
        py::arg("seed") = 1,
        "RANSAC plane fit; returns (normal, d, inlier_count) with normal.p + d = 0.");

    m.def(
        "forward_difference",
        [](const std::vector<Xyz>& pts) {
            PointLine line;
            line.points = to_points(pts);
            return forward_difference(line);
        },
        py::arg("line_points"),
        "Ratio of horizontal-range change to height change between consecutive points.");

    m.def(
        "surface_area",
        [](const std::vector<Xyz>& pts, double cell) { return surface_area(to_points(pts), cell); },
        py::arg("points"), py::arg("cell") = 0.05,
        "Detected area of a point set in square meters.");

    m.def(
        "simulate",
        [](const std::string& scene_path, const std::string& out_dir, int frames, double noise,
           std::uint64_t seed) {
            SceneFile scene = load_scene(scene_path);
            if (frames > 0) scene.frame_count = frames;
            if (noise >= 0.0) scene.sensor.noise_sigma = noise;
            const auto sims = trajectory_through(scene.scene, scene.sensor, scene.waypoints,
                                                 scene.frame_count, seed);
            fs::create_directories(fs::path(out_dir) / "frames");
            char name[32];
            for (std::size_t i = 0; i < sims.size(); ++i) {
                std::snprintf(name, sizeof name, "%06zu.ply", i);
                write_frame_ply((fs::path(out_dir) / "frames" / name).string(), sims[i].scan,
                                &sims[i].truth);
            }
            write_trajectory((fs::path(out_dir) / "trajectory.txt").string(),
                             trajectory_of(sims));
            return sims.size();
        },
        py::arg("scene_path"), py::arg("out_dir"), py::arg("frames") = 0,
        py::arg("noise") = -1.0, py::arg("seed") = 1,
        "Render a scene file into frame PLYs plus a trajectory; returns the frame count.");

    m.def(
        "run",
        [](const std::string& frames_dir, const std::string& trajectory,
           const std::string& out_dir, const PipelineConfig& config, int jobs, bool evaluate) {
            RunInputs inputs;
            inputs.frame_paths = list_frame_files(frames_dir);
            inputs.trajectory_path = trajectory;
            inputs.output_dir = out_dir;
            inputs.jobs = jobs;
            inputs.evaluate_truth = evaluate;
            const RunResult result = run_pipeline(config, inputs);
            py::dict out;
            out["frames_total"] = result.frames_total;
            out["frames_classified"] = result.frames_classified;
            out["frames_fused"] = result.frames_fused;
            out["frames_skipped"] = result.frames_skipped;
            out["classify_ms_average"] = result.timing.average;
            out["ceiling_height"] =
                result.ceiling_height ? py::object(py::float_(*result.ceiling_height))
                                      : py::none();
            out["labeled_cloud"] = result.labeled_cloud_path;
            out["furniture_free_grid"] = result.furniture_free_grid_base;
            py::list rows;
            for (const LabelMetrics& row : result.metrics) rows.append(metrics_row(row));
            out["metrics"] = rows;
            return out;
        },
        py::arg("frames_dir"), py::arg("trajectory"), py::arg("out_dir"),
        py::arg("config") = PipelineConfig{}, py::arg("jobs") = 1, py::arg("evaluate") = false,
        "Full pipeline over recorded frames; returns a summary dict.");

    m.def(
        "evaluate",
        [](const std::string& pred_ply, const std::string& truth_ply, double match_tol) {
            const PlyCloud pred = read_ply(pred_ply);
            const PlyCloud truth = read_ply(truth_ply);
            if (!pred.labels || !truth.labels)
                throw Error("both files need a 'label' property");
            LabeledCloud a{pred.points, *pred.labels, FrameId::World, 0.0};
            LabeledCloud b{truth.points, *truth.labels, FrameId::World, 0.0};
            py::list rows;
            for (const LabelMetrics& row : metrics(a, b, match_tol)) rows.append(metrics_row(row));
            return rows;
        },
        py::arg("pred_ply"), py::arg("truth_ply"), py::arg("match_tol") = 1e-6,
        "Area precision/recall/F1 per label between two labeled clouds.");

    m.def(
        "grid_agreement",
        [](const std::string& base_a, const std::string& base_b) {
            const OccupancyGrid a = read_grid(base_a);
            const OccupancyGrid b = read_grid(base_b);
            if (a.width != b.width || a.height != b.height)
                throw Error("grid dimensions differ");
            std::size_t same = 0;
            for (std::size_t i = 0; i < a.cells.size(); ++i)
                if (a.cells[i] == b.cells[i]) ++same;
            return static_cast<double>(same) / static_cast<double>(a.cells.size());
        },
        py::arg("grid_a"), py::arg("grid_b"),
        "Fraction of matching cells between two grids written by the pipeline.");
}
