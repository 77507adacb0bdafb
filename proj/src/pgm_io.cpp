#include <cstdio>
#include <fstream>
#include <sstream>

#include "ffmap/errors.hpp"
#include "ffmap/io/pgm.hpp"

namespace ffmap {

void write_grid(const std::string& base_path, const OccupancyGrid& grid) {
    const std::string pgm_path = base_path + ".pgm";
    std::ofstream pgm(pgm_path, std::ios::binary);
    if (!pgm) throw ParseError(pgm_path, "cannot open file for writing");
    pgm << "P5\n" << grid.width << " " << grid.height << "\n255\n";
    std::string row(static_cast<std::size_t>(grid.width), '\0');
    // Row 0 of the image is the top of the map (maximum y).
    for (int iy = grid.height - 1; iy >= 0; --iy) {
        for (int ix = 0; ix < grid.width; ++ix) {
            unsigned char byte = kGridUnknownByte;
            switch (grid.at(ix, iy)) {
                case CellState::Occupied: byte = kGridOccupiedByte; break;
                case CellState::Free: byte = kGridFreeByte; break;
                case CellState::Unknown: byte = kGridUnknownByte; break;
            }
            row[static_cast<std::size_t>(ix)] = static_cast<char>(byte);
        }
        pgm.write(row.data(), static_cast<std::streamsize>(row.size()));
    }

    const std::string meta_path = base_path + ".yaml";
    std::ofstream meta(meta_path);
    if (!meta) throw ParseError(meta_path, "cannot open file for writing");
    char buf[128];
    std::snprintf(buf, sizeof buf, "%.6f", grid.resolution);
    meta << "image: " << pgm_path.substr(pgm_path.find_last_of('/') + 1) << "\n";
    meta << "resolution: " << buf << "\n";
    std::snprintf(buf, sizeof buf, "[%.6f, %.6f, 0.000000]", grid.origin_x, grid.origin_y);
    meta << "origin: " << buf << "\n";
    meta << "occupied_value: " << static_cast<int>(kGridOccupiedByte) << "\n";
    meta << "free_value: " << static_cast<int>(kGridFreeByte) << "\n";
    meta << "unknown_value: " << static_cast<int>(kGridUnknownByte) << "\n";
}

OccupancyGrid read_grid(const std::string& base_path) {
    const std::string pgm_path = base_path + ".pgm";
    std::ifstream pgm(pgm_path, std::ios::binary);
    if (!pgm) throw ParseError(pgm_path, "cannot open file");
    std::string magic;
    pgm >> magic;
    if (magic != "P5") throw ParseError(pgm_path, "not a binary PGM (P5) file");
    int width = 0, height = 0, maxval = 0;
    pgm >> width >> height >> maxval;
    if (width <= 0 || height <= 0 || maxval != 255)
        throw ParseError(pgm_path, "unsupported PGM geometry");
    pgm.get();  // single whitespace after maxval

    OccupancyGrid grid;
    grid.width = width;
    grid.height = height;
    grid.cells.assign(static_cast<std::size_t>(width) * height, CellState::Unknown);
    std::string row(static_cast<std::size_t>(width), '\0');
    for (int iy = height - 1; iy >= 0; --iy) {
        pgm.read(row.data(), static_cast<std::streamsize>(row.size()));
        if (!pgm) throw ParseError(pgm_path, "truncated raster");
        for (int ix = 0; ix < width; ++ix) {
            const auto byte = static_cast<unsigned char>(row[static_cast<std::size_t>(ix)]);
            CellState state = CellState::Unknown;
            if (byte == kGridOccupiedByte)
                state = CellState::Occupied;
            else if (byte == kGridFreeByte)
                state = CellState::Free;
            grid.at(ix, iy) = state;
        }
    }

    const std::string meta_path = base_path + ".yaml";
    std::ifstream meta(meta_path);
    if (!meta) throw ParseError(meta_path, "cannot open metadata file");
    std::string line;
    while (std::getline(meta, line)) {
        std::istringstream ls(line);
        std::string key;
        ls >> key;
        if (key == "resolution:") {
            ls >> grid.resolution;
        } else if (key == "origin:") {
            std::string rest;
            std::getline(ls, rest);
            double ox = 0, oy = 0, oth = 0;
            if (std::sscanf(rest.c_str(), " [%lf, %lf, %lf]", &ox, &oy, &oth) >= 2) {
                grid.origin_x = ox;
                grid.origin_y = oy;
            }
        }
    }
    return grid;
}

}  // namespace ffmap
