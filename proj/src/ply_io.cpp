#include <algorithm>
#include <cstring>
#include <fstream>
#include <sstream>

#include "ffmap/errors.hpp"
#include "ffmap/io/ply.hpp"
#include "ffmap/rearrange.hpp"

namespace ffmap {

namespace {

enum class ScalarType { I8, U8, I16, U16, I32, U32, F32, F64 };

std::size_t scalar_size(ScalarType t) {
    switch (t) {
        case ScalarType::I8:
        case ScalarType::U8: return 1;
        case ScalarType::I16:
        case ScalarType::U16: return 2;
        case ScalarType::I32:
        case ScalarType::U32:
        case ScalarType::F32: return 4;
        case ScalarType::F64: return 8;
    }
    return 0;
}

bool parse_scalar_type(const std::string& token, ScalarType& out) {
    if (token == "char" || token == "int8") out = ScalarType::I8;
    else if (token == "uchar" || token == "uint8") out = ScalarType::U8;
    else if (token == "short" || token == "int16") out = ScalarType::I16;
    else if (token == "ushort" || token == "uint16") out = ScalarType::U16;
    else if (token == "int" || token == "int32") out = ScalarType::I32;
    else if (token == "uint" || token == "uint32") out = ScalarType::U32;
    else if (token == "float" || token == "float32") out = ScalarType::F32;
    else if (token == "double" || token == "float64") out = ScalarType::F64;
    else return false;
    return true;
}

double scalar_from_bytes(const unsigned char* p, ScalarType t) {
    switch (t) {
        case ScalarType::I8: return static_cast<double>(*reinterpret_cast<const std::int8_t*>(p));
        case ScalarType::U8: return static_cast<double>(*p);
        case ScalarType::I16: {
            std::int16_t v;
            std::memcpy(&v, p, 2);
            return v;
        }
        case ScalarType::U16: {
            std::uint16_t v;
            std::memcpy(&v, p, 2);
            return v;
        }
        case ScalarType::I32: {
            std::int32_t v;
            std::memcpy(&v, p, 4);
            return v;
        }
        case ScalarType::U32: {
            std::uint32_t v;
            std::memcpy(&v, p, 4);
            return v;
        }
        case ScalarType::F32: {
            float v;
            std::memcpy(&v, p, 4);
            return v;
        }
        case ScalarType::F64: {
            double v;
            std::memcpy(&v, p, 8);
            return v;
        }
    }
    return 0.0;
}

struct Property {
    std::string name;
    ScalarType type = ScalarType::F32;
    std::size_t offset = 0;  // byte offset within a binary vertex row
};

}  // namespace

PlyCloud read_ply(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError(path, "cannot open file");

    std::string line;
    int line_no = 0;
    auto next_line = [&]() -> std::string& {
        if (!std::getline(in, line)) throw ParseError(path, line_no, "unexpected end of header");
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        return line;
    };

    if (next_line() != "ply") throw ParseError(path, line_no, "missing 'ply' magic");

    bool binary = false;
    bool have_format = false;
    std::size_t vertex_count = 0;
    bool in_vertex_element = false;
    bool saw_vertex_element = false;
    std::vector<Property> props;
    std::size_t row_size = 0;
    PlyCloud cloud;

    for (;;) {
        std::istringstream ls(next_line());
        std::string word;
        ls >> word;
        if (word == "end_header") break;
        if (word == "comment" || word == "obj_info") {
            std::string key;
            ls >> key;
            if (key == "timestamp") {
                double t;
                if (ls >> t) cloud.timestamp = t;
            }
            continue;
        }
        if (word == "format") {
            std::string fmt, version;
            ls >> fmt >> version;
            if (fmt == "ascii")
                binary = false;
            else if (fmt == "binary_little_endian")
                binary = true;
            else
                throw ParseError(path, line_no, "unsupported format '" + fmt + "'");
            have_format = true;
            continue;
        }
        if (word == "element") {
            std::string name;
            std::size_t count;
            if (!(ls >> name >> count)) throw ParseError(path, line_no, "malformed element");
            if (name == "vertex") {
                vertex_count = count;
                in_vertex_element = true;
                saw_vertex_element = true;
            } else {
                if (!saw_vertex_element)
                    throw ParseError(path, line_no, "elements before 'vertex' are unsupported");
                if (count > 0 && binary)
                    throw ParseError(path, line_no,
                                     "trailing binary elements are unsupported");
                in_vertex_element = false;
            }
            continue;
        }
        if (word == "property") {
            if (!in_vertex_element) continue;  // properties of trailing ascii elements
            std::string type_token;
            ls >> type_token;
            if (type_token == "list")
                throw ParseError(path, line_no, "list properties are unsupported");
            Property prop;
            if (!parse_scalar_type(type_token, prop.type))
                throw ParseError(path, line_no, "unknown property type '" + type_token + "'");
            ls >> prop.name;
            prop.offset = row_size;
            row_size += scalar_size(prop.type);
            props.push_back(prop);
            continue;
        }
        throw ParseError(path, line_no, "unexpected header line '" + word + "'");
    }
    if (!have_format) throw ParseError(path, line_no, "missing format line");

    int ix = -1, iy = -1, iz = -1, iring = -1, ilabel = -1;
    for (std::size_t i = 0; i < props.size(); ++i) {
        if (props[i].name == "x") ix = static_cast<int>(i);
        else if (props[i].name == "y") iy = static_cast<int>(i);
        else if (props[i].name == "z") iz = static_cast<int>(i);
        else if (props[i].name == "ring") iring = static_cast<int>(i);
        else if (props[i].name == "label") ilabel = static_cast<int>(i);
    }
    if (ix < 0 || iy < 0 || iz < 0)
        throw ParseError(path, "vertex element lacks x/y/z properties");

    cloud.points.reserve(vertex_count);
    if (iring >= 0) cloud.rings.emplace();
    if (ilabel >= 0) cloud.labels.emplace();

    if (binary) {
        std::vector<unsigned char> row(row_size);
        for (std::size_t v = 0; v < vertex_count; ++v) {
            in.read(reinterpret_cast<char*>(row.data()), static_cast<std::streamsize>(row_size));
            if (!in)
                throw ParseError(path, "truncated binary data at vertex " + std::to_string(v));
            auto value = [&](int pi) {
                return scalar_from_bytes(row.data() + props[static_cast<std::size_t>(pi)].offset,
                                         props[static_cast<std::size_t>(pi)].type);
            };
            Point3 p{value(ix), value(iy), value(iz)};
            if (!finite(p))
                throw ParseError(path, "non-finite coordinates at vertex " + std::to_string(v));
            cloud.points.push_back(p);
            if (iring >= 0) cloud.rings->push_back(static_cast<std::uint16_t>(value(iring)));
            if (ilabel >= 0) cloud.labels->push_back(static_cast<Label>(
                static_cast<std::uint8_t>(value(ilabel))));
        }
    } else {
        std::vector<double> values(props.size());
        for (std::size_t v = 0; v < vertex_count; ++v) {
            if (!std::getline(in, line))
                throw ParseError(path, "truncated ascii data at vertex " + std::to_string(v));
            ++line_no;
            std::istringstream ls(line);
            for (std::size_t i = 0; i < props.size(); ++i) {
                if (!(ls >> values[i]))
                    throw ParseError(path, line_no, "expected " + std::to_string(props.size()) +
                                                        " values");
            }
            Point3 p{values[static_cast<std::size_t>(ix)], values[static_cast<std::size_t>(iy)],
                     values[static_cast<std::size_t>(iz)]};
            if (!finite(p)) throw ParseError(path, line_no, "non-finite coordinates");
            cloud.points.push_back(p);
            if (iring >= 0)
                cloud.rings->push_back(
                    static_cast<std::uint16_t>(values[static_cast<std::size_t>(iring)]));
            if (ilabel >= 0)
                cloud.labels->push_back(static_cast<Label>(
                    static_cast<std::uint8_t>(values[static_cast<std::size_t>(ilabel)])));
        }
    }
    return cloud;
}

namespace {

void write_header(std::ofstream& out, std::size_t count, double timestamp, bool with_ring,
                  bool with_label) {
    out << "ply\nformat binary_little_endian 1.0\n";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.9f", timestamp);
    out << "comment timestamp " << buf << "\n";
    out << "element vertex " << count << "\n";
    out << "property float x\nproperty float y\nproperty float z\n";
    if (with_ring) out << "property ushort ring\n";
    if (with_label) out << "property uchar label\n";
    out << "end_header\n";
}

void append_float(std::string& row, float v) {
    char b[4];
    std::memcpy(b, &v, 4);
    row.append(b, 4);
}

}  // namespace

void write_frame_ply(const std::string& path, const OrganizedScan& scan,
                     const std::vector<Label>* truth_labels) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ParseError(path, "cannot open file for writing");
    write_header(out, scan.points.size(), scan.timestamp, true, truth_labels != nullptr);
    std::string row;
    for (std::size_t i = 0; i < scan.points.size(); ++i) {
        row.clear();
        const RawPoint& rp = scan.points[i];
        append_float(row, static_cast<float>(rp.position.x));
        append_float(row, static_cast<float>(rp.position.y));
        append_float(row, static_cast<float>(rp.position.z));
        char rb[2];
        std::memcpy(rb, &rp.ring, 2);
        row.append(rb, 2);
        if (truth_labels) row.push_back(static_cast<char>((*truth_labels)[i]));
        out.write(row.data(), static_cast<std::streamsize>(row.size()));
    }
}

void write_labeled_ply(const std::string& path, const LabeledCloud& cloud) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ParseError(path, "cannot open file for writing");
    write_header(out, cloud.points.size(), cloud.timestamp, false, true);
    std::string row;
    for (std::size_t i = 0; i < cloud.points.size(); ++i) {
        row.clear();
        append_float(row, static_cast<float>(cloud.points[i].x));
        append_float(row, static_cast<float>(cloud.points[i].y));
        append_float(row, static_cast<float>(cloud.points[i].z));
        row.push_back(static_cast<char>(cloud.labels[i]));
        out.write(row.data(), static_cast<std::streamsize>(row.size()));
    }
}

OrganizedScan scan_from_ply(const PlyCloud& ply, int default_n_beams,
                            const Pose& sensor_to_robot) {
    OrganizedScan scan;
    scan.sensor_to_robot = sensor_to_robot;
    scan.timestamp = ply.timestamp.value_or(0.0);
    scan.points.reserve(ply.points.size());

    std::vector<std::uint16_t> rings;
    if (ply.rings) {
        rings = *ply.rings;
    } else {
        rings = recover_rings(ply.points, default_n_beams);
    }
    int max_ring = 0;
    for (std::size_t i = 0; i < ply.points.size(); ++i) {
        scan.points.push_back({ply.points[i], rings[i]});
        max_ring = std::max(max_ring, static_cast<int>(rings[i]));
    }
    scan.n_beams = std::max(default_n_beams, max_ring + 1);
    return scan;
}

}  // namespace ffmap
