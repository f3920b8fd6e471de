#include <sstream>

#include "doctest.h"
#include "dfc/graph_io.hpp"
#include "graph_fixtures.hpp"

using dfc::VertexId;

TEST_CASE("graph files load with bridges in place") {
    std::istringstream in(
        "# two catalogs\n"
        "v 1 10 20 30\n"
        "\n"
        "e 1 2\n"
        "v 2 25 12 14\n");
    auto g = dfc::read_graph(in);
    CHECK(g.vertex_count() == 2);
    CHECK(g.has_edge(VertexId{1}, VertexId{2}));
    CHECK(g.catalog(VertexId{2}).entries().front().key == dfc::Key::from_int(12));
    CHECK(!g.audit());
    CHECK(!fixtures::brute_force_bridge_diff(g));
}

TEST_CASE("graph files round trip through write_graph") {
    std::istringstream in("v 0 1 5\nv 1 -3\nv 2\ne 0 1\ne 1 2\n");
    auto g = dfc::read_graph(in);
    std::ostringstream out;
    dfc::write_graph(out, g);
    std::istringstream again(out.str());
    auto h = dfc::read_graph(again);
    CHECK(h.edges() == g.edges());
    for (VertexId v : g.vertices()) CHECK(h.catalog(v).entries() == g.catalog(v).entries());
}

TEST_CASE("graph file errors") {
    std::istringstream bad_kind("x 1\n");
    CHECK_THROWS_AS(dfc::read_graph(bad_kind), dfc::ParseError);
    std::istringstream bad_key("v 1 2.5\n");
    CHECK_THROWS_AS(dfc::read_graph(bad_key), dfc::ParseError);
    std::istringstream short_edge("v 1\ne 1\n");
    CHECK_THROWS_AS(dfc::read_graph(short_edge), dfc::ParseError);
    std::istringstream too_many("v 0\nv 1\nv 2\nv 3\nv 4\ne 0 1\ne 0 2\ne 0 3\ne 0 4\n");
    CHECK_THROWS_AS(dfc::read_graph(too_many), dfc::GraphError);
    std::istringstream ok_wide("v 0\nv 1\nv 2\nv 3\nv 4\ne 0 1\ne 0 2\ne 0 3\ne 0 4\n");
    CHECK_NOTHROW(dfc::read_graph(ok_wide, 4));
}
