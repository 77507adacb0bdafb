#pragma once

#include <stdexcept>
#include <string>

namespace ffmap {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Thrown by beam_angle on the zero vector.
struct ZeroRange : Error {
    ZeroRange() : Error("beam angle undefined for the zero vector") {}
};

struct EmptyLine : Error {
    EmptyLine() : Error("point line is empty") {}
};

struct LineTooShort : Error {
    LineTooShort() : Error("point line has fewer than 2 points") {}
};

/// No plane reached the minimum inlier fraction during ceiling extraction.
struct NoCeilingFound : Error {
    NoCeilingFound() : Error("no ceiling plane found") {}
};

/// Fewer than 3 points, or all points collinear.
struct DegenerateInput : Error {
    DegenerateInput() : Error("degenerate input: need 3 non-collinear points") {}
};

struct TimestampOutOfRange : Error {
    explicit TimestampOutOfRange(const std::string& what) : Error(what) {}
};

struct EmptyCloud : Error {
    EmptyCloud() : Error("point cloud is empty") {}
};

struct PoseInsideGeometry : Error {
    explicit PoseInsideGeometry(const std::string& what) : Error(what) {}
};

/// File parsing failure with file and line context.
struct ParseError : Error {
    ParseError(const std::string& file, int line, const std::string& what)
        : Error(file + ":" + std::to_string(line) + ": " + what) {}
    ParseError(const std::string& file, const std::string& what) : Error(file + ": " + what) {}
};

}  // namespace ffmap
