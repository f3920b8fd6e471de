#include <algorithm>
#include <queue>
#include <random>
#include <unordered_map>

#include "doctest.h"
#include "dfc/degree_reduce.hpp"
#include "graph_fixtures.hpp"

using dfc::CatalogGraph;
using dfc::Key;
using dfc::VertexId;

namespace {

CatalogGraph star(std::uint32_t leaves, std::size_t max_degree) {
    std::vector<dfc::VertexSpec> vs;
    std::vector<dfc::Edge> es;
    std::uint64_t tag = 0;
    std::mt19937_64 rng(leaves);
    for (std::uint32_t i = 0; i <= leaves; ++i) vs.push_back({VertexId{i}, fixtures::random_entries(8, 100, rng, tag)});
    for (std::uint32_t i = 1; i <= leaves; ++i) es.emplace_back(VertexId{0}, VertexId{i});
    return CatalogGraph::build(vs, es, max_degree);
}

std::size_t max_degree_by_scan(const CatalogGraph& g) {
    std::size_t m = 0;
    for (VertexId v : g.vertices()) m = std::max(m, g.neighbors(v).size());
    return m;
}

std::size_t bfs_distance(const CatalogGraph& g, VertexId from, VertexId to) {
    std::unordered_map<VertexId, std::size_t> dist{{from, 0}};
    std::queue<VertexId> q;
    q.push(from);
    while (!q.empty()) {
        VertexId v = q.front();
        q.pop();
        if (v == to) return dist[v];
        for (VertexId w : g.neighbors(v))
            if (dist.emplace(w, dist[v] + 1).second) q.push(w);
    }
    return SIZE_MAX;
}

}  // namespace

TEST_CASE("star center becomes a seven node tree") {
    auto g = star(6, 6);
    auto r = dfc::degree_reduce(g);
    CHECK(r.tree.at(VertexId{0}).size() == 7);
    CHECK(r.graph.vertex_count() == 7 + 6);
    CHECK(max_degree_by_scan(r.graph) <= 3);
    for (VertexId copy : r.tree.at(VertexId{0})) {
        CHECK(r.graph.shares_catalog(copy, VertexId{0}));
        CHECK(r.graph.catalog(copy).entries() == g.catalog(VertexId{0}).entries());
    }
    CHECK(r.root.at(VertexId{0}) == VertexId{0});
    CHECK(!fixtures::brute_force_bridge_diff(r.graph));
}

TEST_CASE("graphs already within the bound come back unchanged") {
    std::mt19937_64 rng(8);
    std::uint64_t tag = 0;
    auto g = fixtures::random_graph(fixtures::Shape::Random, 20, 6, 50, rng, tag);
    auto r = dfc::degree_reduce(g);
    CHECK(r.tree.empty());
    CHECK(r.graph.vertices() == g.vertices());
    CHECK(r.graph.edges() == g.edges());
    for (VertexId v : g.vertices()) {
        CHECK(r.graph.catalog(v).entries() == g.catalog(v).entries());
        CHECK(r.root.at(v) == v);
    }
}

TEST_CASE("degree four vertex becomes a three node tree") {
    auto g = star(4, 4);
    auto r = dfc::degree_reduce(g);
    CHECK(r.tree.at(VertexId{0}).size() == 3);
    CHECK(max_degree_by_scan(r.graph) <= 3);
    for (std::uint32_t a = 1; a <= 4; ++a)
        for (std::uint32_t b = a + 1; b <= 4; ++b) {
            const auto before = bfs_distance(g, VertexId{a}, VertexId{b});
            const auto after = bfs_distance(r.graph, VertexId{a}, VertexId{b});
            CHECK(before == 2);
            CHECK(after <= before + 2);
        }
}

TEST_CASE("expanded paths give the same answers on original vertices") {
    std::mt19937_64 rng(31);
    for (int t = 0; t < 50; ++t) {
        std::vector<dfc::VertexSpec> vs;
        std::uint64_t tag = 0;
        const std::uint32_t n = 20;
        for (std::uint32_t i = 0; i < n; ++i) vs.push_back({VertexId{i}, fixtures::random_entries(rng() % 12, 80, rng, tag)});
        auto edges = fixtures::random_edges(fixtures::Shape::Random, n, 16, rng);
        auto g = CatalogGraph::build(vs, edges, 16, rng());
        auto r = dfc::degree_reduce(g);
        REQUIRE(max_degree_by_scan(r.graph) <= 3);
        for (int q = 0; q < 20; ++q) {
            auto path = fixtures::random_path(g, 8, rng);
            auto ex = r.expand_path(path);
            const Key x = Key::from_int(static_cast<std::int64_t>(rng() % 90) - 5);
            auto a = g.path_search(path, x);
            auto b = r.graph.path_search(ex.vertices, x);
            for (std::size_t i = 0; i < path.size(); ++i) {
                const auto& pa = a.hits[i].position;
                const auto& pb = b.hits[ex.original_index[i]].position;
                REQUIRE(pa.has_value() == pb.has_value());
                if (pa) CHECK(g.catalog(path[i]).tag(*pa) == r.graph.catalog(ex.vertices[ex.original_index[i]]).tag(*pb));
            }
        }
    }
}

TEST_CASE("updates through shared catalogs keep every copy's bridges exact") {
    auto g = star(6, 6);
    auto r = dfc::degree_reduce(g);
    std::mt19937_64 rng(3);
    std::uint64_t tag = 1000;
    const auto& copies = r.tree.at(VertexId{0});
    for (int op = 0; op < 60; ++op) {
        const VertexId v = (op % 3 == 0) ? VertexId{1 + static_cast<std::uint32_t>(rng() % 6)} : copies[rng() % copies.size()];
        if (r.graph.catalog(v).empty() || rng() % 2)
            r.graph.insert(v, Key::from_int(static_cast<std::int64_t>(rng() % 100)), tag++);
        else
            r.graph.erase(v, *r.graph.catalog(v).first());
        REQUIRE(!fixtures::brute_force_bridge_diff(r.graph));
    }
}

TEST_CASE("target below three is rejected") {
    auto g = star(2, 3);
    CHECK_THROWS_AS(dfc::degree_reduce(g, 2), dfc::GraphError);
}
