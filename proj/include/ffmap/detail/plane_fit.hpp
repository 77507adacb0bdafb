#pragma once

#include <span>

#include "ffmap/geometry.hpp"

namespace ffmap::detail {

PlaneModel fit_plane_tls(std::span<const Point3> points);
PlaneModel fit_vertical_plane_tls(std::span<const Point3> points);

}  // namespace ffmap::detail
