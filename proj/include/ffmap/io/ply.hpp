#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ffmap/geometry.hpp"
#include "ffmap/labeling.hpp"
#include "ffmap/scan.hpp"

namespace ffmap {

/// Vertex data of a PLY file. Properties beyond x/y/z/ring/label are
/// skipped on read.
struct PlyCloud {
    std::vector<Point3> points;
    std::optional<std::vector<std::uint16_t>> rings;
    std::optional<std::vector<Label>> labels;
    std::optional<double> timestamp;  // from a "comment timestamp <t>" line
};

/// Reads ASCII or binary little-endian PLY. Throws ParseError with file
/// and line context on malformed input.
PlyCloud read_ply(const std::string& path);

/// Binary little-endian frame file: float x/y/z (raw sensor frame),
/// ushort ring, uchar label when truth labels are given.
void write_frame_ply(const std::string& path, const OrganizedScan& scan,
                     const std::vector<Label>* truth_labels = nullptr);

/// Binary little-endian labeled cloud: float x/y/z plus uchar label.
void write_labeled_ply(const std::string& path, const LabeledCloud& cloud);

OrganizedScan scan_from_ply(const PlyCloud& ply, int default_n_beams, const Pose& sensor_to_robot);

}  // namespace ffmap
