#include <fstream>
#include <sstream>

#include "ffmap/errors.hpp"
#include "ffmap/simulate.hpp"

namespace ffmap {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::vector<double> parse_numbers(const std::string& value, std::size_t expected,
                                  const std::string& file, int line) {
    std::istringstream in(value);
    std::vector<double> nums;
    double v;
    while (in >> v) nums.push_back(v);
    if (nums.size() != expected)
        throw ParseError(file, line,
                         "expected " + std::to_string(expected) + " numbers, got '" + value + "'");
    return nums;
}

}  // namespace

SceneFile parse_scene(std::istream& in, const std::string& name) {
    SceneFile file;
    std::string section;
    std::string line;
    int line_no = 0;

    auto require_section = [&](const std::string& want) {
        if (section != want)
            throw ParseError(name, line_no, "key outside of [" + want + "] section");
    };

    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;

        if (line.front() == '[') {
            if (line.back() != ']') throw ParseError(name, line_no, "malformed section header");
            section = trim(line.substr(1, line.size() - 2));
            if (section == "wall")
                file.scene.walls.emplace_back();
            else if (section == "door")
                file.scene.doors.emplace_back();
            else if (section == "box")
                file.scene.boxes.emplace_back();
            else if (section == "waypoint")
                file.waypoints.emplace_back();
            else if (section != "sensor")
                throw ParseError(name, line_no, "unknown section [" + section + "]");
            continue;
        }

        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ParseError(name, line_no, "expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));

        if (section.empty()) {
            if (key == "ceiling_height")
                file.scene.ceiling_height = parse_numbers(value, 1, name, line_no)[0];
            else if (key == "frames")
                file.frame_count = static_cast<int>(parse_numbers(value, 1, name, line_no)[0]);
            else
                throw ParseError(name, line_no, "unknown top-level key '" + key + "'");
        } else if (section == "wall") {
            WallSegment& w = file.scene.walls.back();
            if (key == "from") {
                const auto v = parse_numbers(value, 2, name, line_no);
                w.from = {v[0], v[1]};
            } else if (key == "to") {
                const auto v = parse_numbers(value, 2, name, line_no);
                w.to = {v[0], v[1]};
            } else if (key == "height")
                w.height = parse_numbers(value, 1, name, line_no)[0];
            else if (key == "thickness")
                w.thickness = parse_numbers(value, 1, name, line_no)[0];
            else
                throw ParseError(name, line_no, "unknown wall key '" + key + "'");
        } else if (section == "door") {
            DoorSpec& d = file.scene.doors.back();
            if (key == "wall")
                d.wall = static_cast<int>(parse_numbers(value, 1, name, line_no)[0]);
            else if (key == "offset")
                d.offset = parse_numbers(value, 1, name, line_no)[0];
            else if (key == "width")
                d.width = parse_numbers(value, 1, name, line_no)[0];
            else if (key == "lintel")
                d.lintel = parse_numbers(value, 1, name, line_no)[0];
            else if (key == "recess")
                d.recess = parse_numbers(value, 1, name, line_no)[0];
            else if (key == "kind") {
                if (value == "open")
                    d.kind = DoorKind::Open;
                else if (value == "closed")
                    d.kind = DoorKind::Closed;
                else
                    throw ParseError(name, line_no, "door kind must be open or closed");
            } else
                throw ParseError(name, line_no, "unknown door key '" + key + "'");
        } else if (section == "box") {
            BoxSpec& b = file.scene.boxes.back();
            if (key == "min") {
                const auto v = parse_numbers(value, 3, name, line_no);
                b.min = {v[0], v[1], v[2]};
            } else if (key == "size") {
                const auto v = parse_numbers(value, 3, name, line_no);
                b.size = {v[0], v[1], v[2]};
            } else
                throw ParseError(name, line_no, "unknown box key '" + key + "'");
        } else if (section == "sensor") {
            require_section("sensor");
            SensorSpec& s = file.sensor;
            if (key == "beams")
                s.n_beams = static_cast<int>(parse_numbers(value, 1, name, line_no)[0]);
            else if (key == "fov_deg")
                s.fov_deg = parse_numbers(value, 1, name, line_no)[0];
            else if (key == "azimuth_steps")
                s.azimuth_steps = static_cast<int>(parse_numbers(value, 1, name, line_no)[0]);
            else if (key == "max_range")
                s.max_range = parse_numbers(value, 1, name, line_no)[0];
            else if (key == "noise_sigma")
                s.noise_sigma = parse_numbers(value, 1, name, line_no)[0];
            else if (key == "mount_height")
                s.mount_height = parse_numbers(value, 1, name, line_no)[0];
            else
                throw ParseError(name, line_no, "unknown sensor key '" + key + "'");
        } else if (section == "waypoint") {
            Waypoint& w = file.waypoints.back();
            if (key == "pos") {
                const auto v = parse_numbers(value, 2, name, line_no);
                w.position = {v[0], v[1]};
            } else if (key == "yaw_deg")
                w.yaw_deg = parse_numbers(value, 1, name, line_no)[0];
            else if (key == "time")
                w.time = parse_numbers(value, 1, name, line_no)[0];
            else
                throw ParseError(name, line_no, "unknown waypoint key '" + key + "'");
        }
    }

    for (const DoorSpec& d : file.scene.doors) {
        if (d.wall < 0 || static_cast<std::size_t>(d.wall) >= file.scene.walls.size())
            throw ParseError(name, "door references wall " + std::to_string(d.wall) +
                                       " but the scene has " +
                                       std::to_string(file.scene.walls.size()) + " walls");
        const double len = file.scene.walls[static_cast<std::size_t>(d.wall)].length();
        if (d.offset < 0.0 || d.offset + d.width > len)
            throw ParseError(name, "door does not fit inside its wall segment");
    }
    for (std::size_t i = 1; i < file.waypoints.size(); ++i) {
        if (file.waypoints[i].time < file.waypoints[i - 1].time)
            throw ParseError(name, "waypoint times must not decrease");
    }
    return file;
}

SceneFile load_scene(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError(path, "cannot open scene file");
    return parse_scene(in, path);
}

void save_scene(const SceneFile& file, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ParseError(path, "cannot write scene file");
    out << "ceiling_height = " << file.scene.ceiling_height << "\n";
    out << "frames = " << file.frame_count << "\n";
    out << "\n[sensor]\n";
    out << "beams = " << file.sensor.n_beams << "\n";
    out << "fov_deg = " << file.sensor.fov_deg << "\n";
    out << "azimuth_steps = " << file.sensor.azimuth_steps << "\n";
    out << "max_range = " << file.sensor.max_range << "\n";
    out << "noise_sigma = " << file.sensor.noise_sigma << "\n";
    out << "mount_height = " << file.sensor.mount_height << "\n";
    for (const WallSegment& w : file.scene.walls) {
        out << "\n[wall]\n";
        out << "from = " << w.from.x << " " << w.from.y << "\n";
        out << "to = " << w.to.x << " " << w.to.y << "\n";
        if (w.height > 0.0) out << "height = " << w.height << "\n";
        out << "thickness = " << w.thickness << "\n";
    }
    for (const DoorSpec& d : file.scene.doors) {
        out << "\n[door]\n";
        out << "wall = " << d.wall << "\n";
        out << "offset = " << d.offset << "\n";
        out << "width = " << d.width << "\n";
        out << "lintel = " << d.lintel << "\n";
        out << "kind = " << (d.kind == DoorKind::Open ? "open" : "closed") << "\n";
        if (d.kind == DoorKind::Closed) out << "recess = " << d.recess << "\n";
    }
    for (const BoxSpec& b : file.scene.boxes) {
        out << "\n[box]\n";
        out << "min = " << b.min.x << " " << b.min.y << " " << b.min.z << "\n";
        out << "size = " << b.size.x << " " << b.size.y << " " << b.size.z << "\n";
    }
    for (const Waypoint& w : file.waypoints) {
        out << "\n[waypoint]\n";
        out << "pos = " << w.position.x << " " << w.position.y << "\n";
        out << "yaw_deg = " << w.yaw_deg << "\n";
        out << "time = " << w.time << "\n";
    }
}

}  // namespace ffmap
