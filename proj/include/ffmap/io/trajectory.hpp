#pragma once

#include <string>

#include "ffmap/mapping.hpp"

namespace ffmap {

/// Text trajectory, one pose per line: "timestamp tx ty tz qx qy qz qw",
/// whitespace separated, '#' comments. Quaternions are normalized on
/// read; timestamps must increase strictly.
Trajectory read_trajectory(const std::string& path);
void write_trajectory(const std::string& path, const Trajectory& trajectory);

}  // namespace ffmap
