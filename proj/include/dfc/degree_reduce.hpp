#ifndef DFC_DEGREE_REDUCE_HPP
#define DFC_DEGREE_REDUCE_HPP

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <unordered_map>
#include <utility>
#include <vector>

#include "dfc/catalog_graph.hpp"

namespace dfc {

struct ExpandedPath {
    std::vector<VertexId> vertices;
    /// For each vertex of the original path, its index in `vertices`.
    std::vector<std::size_t> original_index;
};

/**
 * A catalog graph with every vertex of degree above the target replaced by a
 * complete binary tree of vertices sharing one catalog.
 *
 * The tree for a vertex of degree d has L leaves, L the smallest power of two
 * with 2L >= d, and the original neighbors hang two per leaf. Vertex ids of the
 * input survive (a replaced vertex becomes its tree's root); tree copies get
 * fresh ids above the input's id range.
 */
struct DegreeReduction {
    CatalogGraph graph;
    std::unordered_map<VertexId, VertexId> root;
    /// Heap-ordered tree nodes (index 0 is the root) of each replaced vertex.
    std::unordered_map<VertexId, std::vector<VertexId>> tree;
    /// (replaced vertex, original neighbor) -> heap index of the leaf holding that edge.
    std::map<Edge, std::uint32_t> port;

    /// Maps a path of the original graph onto the reduced graph, routing
    /// through each replaced vertex's tree between its entry and exit leaves.
    ExpandedPath expand_path(std::span<const VertexId> original) const;
};

/// Throws GraphError when target < 3.
DegreeReduction degree_reduce(const CatalogGraph& g, std::size_t target = 3);

}  // namespace dfc

#endif
