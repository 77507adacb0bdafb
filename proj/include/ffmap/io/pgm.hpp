#pragma once

#include <string>

#include "ffmap/mapping.hpp"

namespace ffmap {

// Grid byte convention in the PGM raster.
inline constexpr unsigned char kGridOccupiedByte = 0;
inline constexpr unsigned char kGridFreeByte = 254;
inline constexpr unsigned char kGridUnknownByte = 205;

/// Writes `<base>.pgm` (binary P5, maxval 255, row 0 at the top = maximum
/// y) and a sibling `<base>.yaml` with resolution, origin and the byte
/// convention.
void write_grid(const std::string& base_path, const OccupancyGrid& grid);

/// Reads a grid written by write_grid (requires the .yaml sibling).
OccupancyGrid read_grid(const std::string& base_path);

}  // namespace ffmap
