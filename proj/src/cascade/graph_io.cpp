#include "dfc/graph_io.hpp"

#include <charconv>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

namespace dfc {

namespace {

template <typename T>
T parse_number(const std::string& token, std::size_t line) {
    T value{};
    const auto* end = token.data() + token.size();
    auto [ptr, ec] = std::from_chars(token.data(), end, value);
    if (ec != std::errc() || ptr != end)
        throw ParseError("line " + std::to_string(line) + ": bad number '" + token + "'");
    return value;
}

VertexId parse_id(const std::string& token, std::size_t line) {
    return VertexId{parse_number<std::uint32_t>(token, line)};
}

}  // namespace

CatalogGraph read_graph(std::istream& in, std::size_t max_degree, std::uint64_t seed) {
    std::vector<VertexSpec> vertices;
    std::vector<Edge> edges;
    std::string text;
    std::size_t line = 0;
    while (std::getline(in, text)) {
        ++line;
        std::istringstream fields(text);
        std::string kind;
        if (!(fields >> kind) || kind[0] == '#') continue;
        std::vector<std::string> rest;
        for (std::string tok; fields >> tok;) rest.push_back(tok);
        if (kind == "v") {
            if (rest.empty()) throw ParseError("line " + std::to_string(line) + ": vertex line without id");
            VertexSpec spec{parse_id(rest[0], line), {}};
            for (std::size_t i = 1; i < rest.size(); ++i)
                spec.entries.push_back({Key::from_int(parse_number<std::int64_t>(rest[i], line)), i - 1});
            vertices.push_back(std::move(spec));
        } else if (kind == "e") {
            if (rest.size() != 2)
                throw ParseError("line " + std::to_string(line) + ": edge line needs two ids");
            edges.emplace_back(parse_id(rest[0], line), parse_id(rest[1], line));
        } else {
            throw ParseError("line " + std::to_string(line) + ": unknown record '" + kind + "'");
        }
    }
    return CatalogGraph::build(vertices, edges, max_degree, seed);
}

void write_graph(std::ostream& out, const CatalogGraph& g) {
    for (VertexId v : g.vertices()) {
        out << "v " << v.value;
        for (const auto& e : g.catalog(v).entries()) out << ' ' << e.key.to_int();
        out << '\n';
    }
    for (const auto& [v, w] : g.edges()) out << "e " << v.value << ' ' << w.value << '\n';
}

}  // namespace dfc
