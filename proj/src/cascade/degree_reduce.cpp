#include "dfc/degree_reduce.hpp"

#include <algorithm>

namespace dfc {

namespace {

std::uint32_t parent(std::uint32_t i) { return (i - 1) / 2; }

// Heap indices from a to b through their lowest common ancestor.
std::vector<std::uint32_t> heap_route(std::uint32_t a, std::uint32_t b) {
    std::vector<std::uint32_t> up, down;
    while (a != b) {
        if (a > b) {
            up.push_back(a);
            a = parent(a);
        } else {
            down.push_back(b);
            b = parent(b);
        }
    }
    up.push_back(a);
    up.insert(up.end(), down.rbegin(), down.rend());
    return up;
}

}  // namespace

DegreeReduction degree_reduce(const CatalogGraph& g, std::size_t target) {
    if (target < 3) throw GraphError("degree reduction target must be at least 3");
    DegreeReduction out{CatalogGraph(target), {}, {}, {}};
    CatalogGraph& r = out.graph;
    std::uint32_t next_id = g.id_bound();

    for (VertexId v : g.vertices()) {
        const auto entries = g.catalog(v).entries();
        r.add_vertex(v, entries);
        out.root[v] = v;
        const std::size_t d = g.degree(v);
        if (d <= target) continue;

        std::uint32_t leaves = 1;
        while (2 * leaves < d) leaves *= 2;
        const std::uint32_t count = 2 * leaves - 1;
        auto& nodes = out.tree[v];
        nodes.push_back(v);
        for (std::uint32_t i = 1; i < count; ++i) {
            nodes.push_back(VertexId{next_id++});
            r.add_shared_vertex(nodes.back(), v);
            r.add_edge(nodes[parent(i)], nodes[i]);
        }
        const auto nbrs = g.neighbors(v);
        for (std::size_t k = 0; k < nbrs.size(); ++k)
            out.port[{v, nbrs[k]}] = (leaves - 1) + static_cast<std::uint32_t>(k / 2);
    }

    auto endpoint = [&](VertexId v, VertexId u) {
        auto it = out.port.find({v, u});
        return it == out.port.end() ? v : out.tree.at(v)[it->second];
    };
    for (const auto& [v, u] : g.edges()) r.add_edge(endpoint(v, u), endpoint(u, v));
    return out;
}

ExpandedPath DegreeReduction::expand_path(std::span<const VertexId> original) const {
    ExpandedPath out;
    auto port_of = [&](VertexId v, VertexId u) {
        auto it = port.find({v, u});
        if (it == port.end())
            throw GraphError("vertices " + to_string(v) + " and " + to_string(u) + " are not adjacent");
        return it->second;
    };
    for (std::size_t i = 0; i < original.size(); ++i) {
        const VertexId v = original[i];
        auto t = tree.find(v);
        if (t == tree.end()) {
            out.original_index.push_back(out.vertices.size());
            out.vertices.push_back(v);
            continue;
        }
        const bool has_prev = i > 0, has_next = i + 1 < original.size();
        const std::uint32_t entry = has_prev ? port_of(v, original[i - 1])
                                   : has_next ? port_of(v, original[i + 1])
                                              : 0;
        const std::uint32_t exit = has_next ? port_of(v, original[i + 1]) : entry;
        out.original_index.push_back(out.vertices.size());
        for (std::uint32_t h : heap_route(entry, exit)) out.vertices.push_back(t->second[h]);
    }
    return out;
}

}  // namespace dfc
