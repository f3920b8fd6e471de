#ifndef DFC_CATALOG_GRAPH_HPP
#define DFC_CATALOG_GRAPH_HPP

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "dfc/catalog.hpp"

namespace dfc {

struct VertexId {
    std::uint32_t value = 0;

    friend constexpr auto operator<=>(VertexId, VertexId) = default;
};

/// Structural misuse of a catalog graph: unknown vertex, missing edge, degree overflow.
class GraphError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct VertexSpec {
    VertexId id;
    std::vector<Entry> entries;  // any order; sorted on build
};

using Edge = std::pair<VertexId, VertexId>;

struct EdgeCost {
    VertexId from;
    VertexId to;
    std::size_t finger_steps = 0;
    std::size_t delta = 0;  // 0 when discrepancy was not measured
};

/// Per-edge step counters accumulated by one path search.
struct CostTrace {
    std::size_t entry_steps = 0;
    std::vector<EdgeCost> edges;
    std::size_t total_finger_steps = 0;
    std::size_t total_delta = 0;

    double sum_log2_delta() const;
};

struct PathHit {
    VertexId vertex;
    Position position;
};

struct PathResult {
    std::vector<PathHit> hits;
    CostTrace trace;
};

struct SearchOptions {
    bool measure_discrepancy = true;
};

/**
 * Bounded-degree graph whose vertices own sorted catalogs, with exact bridge
 * maps on every directed edge.
 *
 * For an edge v -> w, bridge(a) is the closed predecessor of key(a) in C(w)
 * for every element a of C(v). Bridges are maintained eagerly: an insertion or
 * deletion re-targets exactly the contiguous run of neighbor elements whose
 * predecessor changed, so update work is proportional to the reverse local
 * discrepancy at the updated key.
 *
 * path_search locates x at the first vertex with a full search and then hands
 * off along each edge: from the answer a at v it jumps to bridge(a) in C(w)
 * and finger-searches forward. The bridge never lies past x, and the
 * distance it has to cover is bounded by the local discrepancy at x.
 *
 * Several vertices may share one catalog (see degree_reduce). An update on any
 * of them updates the bridges of all of them.
 *
 * Single writer. Const member functions may run concurrently with each other.
 */
class CatalogGraph {
public:
    static constexpr std::size_t kDefaultMaxDegree = 3;

    explicit CatalogGraph(std::size_t max_degree = kDefaultMaxDegree, std::uint64_t seed = 0x5eed);

    static CatalogGraph build(std::span<const VertexSpec> vertices, std::span<const Edge> edges,
                              std::size_t max_degree = kDefaultMaxDegree,
                              std::uint64_t seed = 0x5eed);

    std::size_t max_degree() const { return max_degree_; }
    std::size_t vertex_count() const { return vertex_count_; }
    std::size_t edge_count() const { return edge_count_; }
    /// One past the largest id ever used; ids below it may be vacant.
    std::uint32_t id_bound() const { return static_cast<std::uint32_t>(vertices_.size()); }
    std::vector<VertexId> vertices() const;
    std::vector<Edge> edges() const;

    VertexId add_vertex(std::span<const Entry> entries = {});
    void add_vertex(VertexId id, std::span<const Entry> entries);
    /// New vertex (at `id`, or a fresh id) that shares `like`'s catalog object.
    VertexId add_shared_vertex(VertexId like);
    void add_shared_vertex(VertexId id, VertexId like);
    void remove_vertex(VertexId v);

    void add_edge(VertexId v, VertexId w);
    void remove_edge(VertexId v, VertexId w);

    bool has_vertex(VertexId v) const;
    bool has_edge(VertexId v, VertexId w) const;
    std::size_t degree(VertexId v) const;
    std::vector<VertexId> neighbors(VertexId v) const;
    bool shares_catalog(VertexId v, VertexId w) const;

    const Catalog& catalog(VertexId v) const;

    ElementHandle insert(VertexId v, Key k, std::uint64_t tag = 0);
    Key erase(VertexId v, ElementHandle h);

    /// Bridge of `at_v` along v -> w; the -inf marker maps to itself.
    Position bridge(VertexId v, VertexId w, Position at_v) const;

    /// 2 + |{b in C(w) : a- <= b < a+}| where a-, a+ bracket x in C(v).
    std::size_t local_discrepancy(VertexId v, VertexId w, Key x) const;

    PathResult path_search(std::span<const VertexId> path, Key x, SearchOptions options = {}) const;

    /// One hand-off: given any position at v not past x (normally pred_{C(v)}(x)),
    /// returns pred_{C(w)}(x) found by finger search from the bridge.
    FingerResult cascade_step(VertexId v, VertexId w, Position at_v, Key x) const;

    /// Recomputes every bridge with independent predecessor searches and checks
    /// exactness and monotonicity. Returns a description of the first problem found.
    std::optional<std::string> audit() const;

private:
    static constexpr std::uint32_t kNone = 0xFFFFFFFFu;

    struct Shared {
        Catalog catalog;
        std::vector<VertexId> members;
    };

    struct Arc {
        VertexId to;
        std::vector<std::uint32_t> bridge;  // by own slot -> target slot or kNone
    };

    struct Vertex {
        std::shared_ptr<Shared> shared;
        std::vector<Arc> arcs;
    };

    Vertex& vertex(VertexId v);
    const Vertex& vertex(VertexId v) const;
    Arc* find_arc(VertexId v, VertexId w);
    const Arc* find_arc(VertexId v, VertexId w) const;
    const Arc& arc(VertexId v, VertexId w) const;
    void place_vertex(VertexId id, std::shared_ptr<Shared> shared);
    VertexId fresh_id();
    void rebuild_bridges(VertexId v, Arc& arc);
    std::uint64_t next_seed();

    std::size_t max_degree_;
    std::uint64_t seed_;
    std::vector<std::optional<Vertex>> vertices_;
    std::size_t vertex_count_ = 0;
    std::size_t edge_count_ = 0;
    std::vector<std::uint32_t> free_ids_;
    std::uint64_t seeds_issued_ = 0;
};

std::string to_string(VertexId v);

}  // namespace dfc

template <>
struct std::hash<dfc::VertexId> {
    std::size_t operator()(dfc::VertexId v) const noexcept { return std::hash<std::uint32_t>{}(v.value); }
};

#endif
