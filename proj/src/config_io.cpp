#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "ffmap/errors.hpp"
#include "ffmap/io/config.hpp"

namespace ffmap {

Pose PipelineConfig::sensor_to_robot() const {
    Pose pose;
    pose.translation = {sensor_tx, sensor_ty, sensor_tz};
    pose.rotation = Quaternion{sensor_qw, sensor_qx, sensor_qy, sensor_qz}.normalized();
    return pose;
}

RearrangeParams PipelineConfig::rearrange_params() const {
    RearrangeParams p;
    p.z_floor = z_floor;
    p.ceiling.angle_tol_deg = angle_tol;
    p.ceiling.dist_tol = dist_tol;
    p.ceiling.min_height = min_height;
    p.resample_count = resample_count;
    return p;
}

WallParams PipelineConfig::wall_params() const {
    WallParams p;
    p.d_threshold = d_threshold;
    p.min_points = min_points;
    p.sigma_th = sigma_th;
    p.min_lines_per_wall = min_lines_per_wall;
    p.vertical_tol_deg = vertical_tol;
    return p;
}

DoorParams PipelineConfig::door_params() const {
    DoorParams p;
    p.delta_door = delta_door;
    p.h_min = h_min;
    p.wall_band = wall_band;
    p.min_points = min_points;
    return p;
}

LabelParams PipelineConfig::label_params() const {
    LabelParams p;
    p.wall_band = wall_band;
    p.z_floor = z_floor;
    p.delta_door = delta_door;
    return p;
}

namespace {

struct Field {
    std::function<void(PipelineConfig&, const std::string&)> set;
    std::function<std::string(const PipelineConfig&)> get;
};

std::string fmt_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

double to_double(const std::string& key, const std::string& value) {
    std::size_t pos = 0;
    double v = 0;
    try {
        v = std::stod(value, &pos);
    } catch (const std::exception&) {
        throw Error("config key '" + key + "': not a number: '" + value + "'");
    }
    if (pos != value.size())
        throw Error("config key '" + key + "': trailing characters in '" + value + "'");
    return v;
}

const std::map<std::string, Field>& fields() {
    static const std::map<std::string, Field> table = [] {
        std::map<std::string, Field> t;
        auto add_double = [&](const std::string& name, double PipelineConfig::* member) {
            t[name] = {[name, member](PipelineConfig& c, const std::string& v) {
                           c.*member = to_double(name, v);
                       },
                       [member](const PipelineConfig& c) { return fmt_double(c.*member); }};
        };
        auto add_int = [&](const std::string& name, int PipelineConfig::* member) {
            t[name] = {[name, member](PipelineConfig& c, const std::string& v) {
                           c.*member = static_cast<int>(to_double(name, v));
                       },
                       [member](const PipelineConfig& c) { return std::to_string(c.*member); }};
        };
        add_double("z_floor", &PipelineConfig::z_floor);
        add_double("dist_tol", &PipelineConfig::dist_tol);
        add_double("angle_tol", &PipelineConfig::angle_tol);
        add_double("min_height", &PipelineConfig::min_height);
        add_int("resample_count", &PipelineConfig::resample_count);
        add_int("n_beams", &PipelineConfig::n_beams);
        add_double("d_threshold", &PipelineConfig::d_threshold);
        add_int("min_points", &PipelineConfig::min_points);
        add_double("sigma_th", &PipelineConfig::sigma_th);
        add_int("min_lines_per_wall", &PipelineConfig::min_lines_per_wall);
        add_double("vertical_tol", &PipelineConfig::vertical_tol);
        add_double("delta_door", &PipelineConfig::delta_door);
        add_double("h_min", &PipelineConfig::h_min);
        add_double("wall_band", &PipelineConfig::wall_band);
        add_double("resolution", &PipelineConfig::resolution);
        add_int("min_hits", &PipelineConfig::min_hits);
        add_double("slice_below_a", &PipelineConfig::slice_below_a);
        add_double("slice_below_b", &PipelineConfig::slice_below_b);
        add_double("slice_mid_lo", &PipelineConfig::slice_mid_lo);
        add_double("slice_mid_hi", &PipelineConfig::slice_mid_hi);
        add_double("sensor_tx", &PipelineConfig::sensor_tx);
        add_double("sensor_ty", &PipelineConfig::sensor_ty);
        add_double("sensor_tz", &PipelineConfig::sensor_tz);
        add_double("sensor_qx", &PipelineConfig::sensor_qx);
        add_double("sensor_qy", &PipelineConfig::sensor_qy);
        add_double("sensor_qz", &PipelineConfig::sensor_qz);
        add_double("sensor_qw", &PipelineConfig::sensor_qw);
        t["seed"] = {[](PipelineConfig& c, const std::string& v) {
                         c.seed = std::stoull(v);
                     },
                     [](const PipelineConfig& c) { return std::to_string(c.seed); }};
        return t;
    }();
    return table;
}

}  // namespace

std::vector<std::string> config_keys() {
    std::vector<std::string> keys;
    keys.reserve(fields().size());
    for (const auto& [name, field] : fields()) keys.push_back(name);
    return keys;
}

void validate_config(const PipelineConfig& config) {
    const struct {
        const char* name;
        double value;
    } tolerances[] = {
        {"z_floor", config.z_floor},       {"dist_tol", config.dist_tol},
        {"angle_tol", config.angle_tol},   {"min_height", config.min_height},
        {"d_threshold", config.d_threshold}, {"sigma_th", config.sigma_th},
        {"vertical_tol", config.vertical_tol}, {"delta_door", config.delta_door},
        {"h_min", config.h_min},           {"wall_band", config.wall_band},
        {"resolution", config.resolution},
    };
    for (const auto& t : tolerances) {
        if (!(t.value > 0.0))
            throw Error(std::string("config: ") + t.name + " must be positive");
    }
    if (config.min_points < 2) throw Error("config: min_points must be at least 2");
    if (config.resample_count < config.min_points)
        throw Error("config: resample_count must be at least min_points");
    if (config.n_beams < 1) throw Error("config: n_beams must be at least 1");
    if (config.min_hits < 1) throw Error("config: min_hits must be at least 1");
}

void apply_config_entry(PipelineConfig& config, const std::string& key, const std::string& value) {
    const auto it = fields().find(key);
    if (it == fields().end()) throw Error("unknown config key '" + key + "'");
    it->second.set(config, value);
}

PipelineConfig parse_config(std::istream& in, const std::string& name) {
    PipelineConfig config;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::string trimmed;
        {
            const auto b = line.find_first_not_of(" \t\r\n");
            if (b == std::string::npos) continue;
            const auto e = line.find_last_not_of(" \t\r\n");
            trimmed = line.substr(b, e - b + 1);
        }
        const auto eq = trimmed.find('=');
        if (eq == std::string::npos) throw ParseError(name, line_no, "expected key = value");
        std::string key = trimmed.substr(0, eq);
        std::string value = trimmed.substr(eq + 1);
        key.erase(key.find_last_not_of(" \t") + 1);
        const auto vb = value.find_first_not_of(" \t");
        value = vb == std::string::npos ? "" : value.substr(vb);
        try {
            apply_config_entry(config, key, value);
        } catch (const Error& e) {
            throw ParseError(name, line_no, e.what());
        }
    }
    return config;
}

PipelineConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError(path, "cannot open config file");
    return parse_config(in, path);
}

void serialize_config(std::ostream& out, const PipelineConfig& config) {
    for (const auto& [name, field] : fields()) out << name << " = " << field.get(config) << "\n";
}

}  // namespace ffmap
