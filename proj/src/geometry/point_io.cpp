#include "dfc/geometry/point_io.hpp"

#include <charconv>
#include <cmath>
#include <string>
#include <string_view>

#include <fmt/format.h>

namespace dfc::geometry {

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

double parse_coordinate(std::string_view token, std::size_t line_no) {
    token = trim(token);
    double value = 0.0;
    const char* end = token.data() + token.size();
    auto [ptr, ec] = std::from_chars(token.data(), end, value);
    if (token.empty() || ec != std::errc() || ptr != end || !std::isfinite(value))
        throw PointParseError(fmt::format("line {}: invalid coordinate '{}'", line_no, token));
    return value;
}

}  // namespace

std::vector<Point> read_points(std::istream& in) {
    std::vector<Point> points;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string_view text = trim(line);
        if (text.empty() || text.front() == '#') continue;
        const auto comma = text.find(',');
        if (comma == std::string_view::npos)
            throw PointParseError(fmt::format("line {}: expected 'x,y'", line_no));
        const double x = parse_coordinate(text.substr(0, comma), line_no);
        const double y = parse_coordinate(text.substr(comma + 1), line_no);
        points.push_back({x, y, points.size()});
    }
    return points;
}

void write_points(std::ostream& out, std::span<const Point> points) {
    for (const Point& p : points) out << fmt::format("{},{}\n", p.x, p.y);
}

}  // namespace dfc::geometry
