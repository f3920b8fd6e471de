#ifndef DFC_GEOMETRY_POINT_IO_HPP
#define DFC_GEOMETRY_POINT_IO_HPP

#include <istream>
#include <ostream>
#include <span>
#include <stdexcept>
#include <vector>

#include "dfc/geometry/point_set.hpp"

namespace dfc::geometry {

class PointParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Reads `x,y` lines. Blank lines and lines starting with '#' are skipped.
/// Ids are assigned 0, 1, 2, ... in order of data lines.
std::vector<Point> read_points(std::istream& in);
void write_points(std::ostream& out, std::span<const Point> points);

}  // namespace dfc::geometry

#endif
