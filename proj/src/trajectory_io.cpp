#include <cstdio>
#include <fstream>
#include <sstream>

#include "ffmap/errors.hpp"
#include "ffmap/io/trajectory.hpp"

namespace ffmap {

Trajectory read_trajectory(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError(path, "cannot open trajectory file");
    Trajectory traj;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        double t, tx, ty, tz, qx, qy, qz, qw;
        if (!(ls >> t)) continue;  // blank line
        if (!(ls >> tx >> ty >> tz >> qx >> qy >> qz >> qw))
            throw ParseError(path, line_no, "expected: timestamp tx ty tz qx qy qz qw");
        Quaternion q{qw, qx, qy, qz};
        const double n = q.norm();
        if (n < 1e-9) throw ParseError(path, line_no, "zero quaternion");
        if (std::abs(n - 1.0) > 1e-3)
            throw ParseError(path, line_no, "quaternion norm " + std::to_string(n));
        if (!traj.poses.empty() && t <= traj.poses.back().timestamp)
            throw ParseError(path, line_no, "timestamps must increase strictly");
        traj.poses.push_back({{tx, ty, tz}, q.normalized(), t});
    }
    if (traj.poses.empty()) throw ParseError(path, "trajectory file holds no poses");
    return traj;
}

void write_trajectory(const std::string& path, const Trajectory& trajectory) {
    std::ofstream out(path);
    if (!out) throw ParseError(path, "cannot open file for writing");
    out << "# timestamp tx ty tz qx qy qz qw\n";
    char buf[256];
    for (const Pose& p : trajectory.poses) {
        std::snprintf(buf, sizeof buf, "%.9f %.9f %.9f %.9f %.9f %.9f %.9f %.9f\n", p.timestamp,
                      p.translation.x, p.translation.y, p.translation.z, p.rotation.x,
                      p.rotation.y, p.rotation.z, p.rotation.w);
        out << buf;
    }
}

}  // namespace ffmap
