#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "ffmap/geometry.hpp"
#include "ffmap/labeling.hpp"
#include "ffmap/rearrange.hpp"
#include "ffmap/walls.hpp"

namespace ffmap {

/// Every pipeline tunable, with defaults. Serialized as `key = value`
/// lines; unknown keys are rejected.
struct PipelineConfig {
    // Rearrangement
    double z_floor = 0.10;
    double dist_tol = 0.05;
    double angle_tol = 10.0;   // degrees
    double min_height = 1.5;
    int resample_count = 200;
    int n_beams = 32;

    // Wall detection
    double d_threshold = 1.0;
    int min_points = 10;
    double sigma_th = 0.05;
    int min_lines_per_wall = 3;
    double vertical_tol = 10.0;  // degrees

    // Doors
    double delta_door = 0.02;
    double h_min = 1.6;
    double wall_band = 0.08;

    // Grids
    double resolution = 0.05;
    int min_hits = 3;
    double slice_below_a = 0.5;
    double slice_below_b = 0.6;
    double slice_mid_lo = 0.5;
    double slice_mid_hi = 1.5;

    std::uint64_t seed = 1;

    // Sensor extrinsic, raw sensor frame -> robot frame. Defaults to the
    // standard vertical mounting at 0.8 m.
    double sensor_tx = 0.0;
    double sensor_ty = 0.0;
    double sensor_tz = 0.8;
    double sensor_qx = -0.5;
    double sensor_qy = -0.5;
    double sensor_qz = -0.5;
    double sensor_qw = 0.5;

    Pose sensor_to_robot() const;
    RearrangeParams rearrange_params() const;
    WallParams wall_params() const;
    DoorParams door_params() const;
    LabelParams label_params() const;
};

/// All config keys, in serialization order.
std::vector<std::string> config_keys();
/// Throws when a tolerance is non-positive or resample_count < min_points.
void validate_config(const PipelineConfig& config);

PipelineConfig parse_config(std::istream& in, const std::string& name);
PipelineConfig load_config(const std::string& path);
/// Applies one `key = value` assignment (flag overrides reuse this).
void apply_config_entry(PipelineConfig& config, const std::string& key, const std::string& value);
void serialize_config(std::ostream& out, const PipelineConfig& config);

}  // namespace ffmap
