#include "dfc/catalog_graph.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

namespace dfc {

std::string to_string(VertexId v) {
    return std::to_string(v.value);
}

double CostTrace::sum_log2_delta() const {
    double s = 0.0;
    for (const auto& e : edges)
        if (e.delta > 0) s += std::log2(static_cast<double>(e.delta));
    return s;
}

CatalogGraph::CatalogGraph(std::size_t max_degree, std::uint64_t seed)
    : max_degree_(max_degree), seed_(seed) {
    if (max_degree_ == 0) throw GraphError("max degree must be positive");
}

CatalogGraph CatalogGraph::build(std::span<const VertexSpec> vertices, std::span<const Edge> edges,
                                 std::size_t max_degree, std::uint64_t seed) {
    CatalogGraph g(max_degree, seed);
    for (const auto& spec : vertices) g.add_vertex(spec.id, spec.entries);
    std::unordered_map<VertexId, std::size_t> degree;
    for (const auto& [v, w] : edges) {
        if (!g.has_vertex(v) || !g.has_vertex(w))
            throw GraphError("edge " + to_string(v) + "-" + to_string(w) + " references an unknown vertex");
        for (VertexId u : {v, w})
            if (++degree[u] > max_degree)
                throw GraphError("vertex " + to_string(u) + " exceeds max degree " +
                                 std::to_string(max_degree));
    }
    for (const auto& [v, w] : edges) g.add_edge(v, w);
    return g;
}

std::uint64_t CatalogGraph::next_seed() {
    return derive_seed(seed_, seeds_issued_++);
}

std::vector<VertexId> CatalogGraph::vertices() const {
    std::vector<VertexId> out;
    for (std::uint32_t i = 0; i < vertices_.size(); ++i)
        if (vertices_[i]) out.push_back(VertexId{i});
    return out;
}

std::vector<Edge> CatalogGraph::edges() const {
    std::vector<Edge> out;
    for (std::uint32_t i = 0; i < vertices_.size(); ++i) {
        if (!vertices_[i]) continue;
        for (const auto& a : vertices_[i]->arcs)
            if (i < a.to.value) out.emplace_back(VertexId{i}, a.to);
    }
    return out;
}

bool CatalogGraph::has_vertex(VertexId v) const {
    return v.value < vertices_.size() && vertices_[v.value].has_value();
}

CatalogGraph::Vertex& CatalogGraph::vertex(VertexId v) {
    if (!has_vertex(v)) throw GraphError("unknown vertex " + to_string(v));
    return *vertices_[v.value];
}

const CatalogGraph::Vertex& CatalogGraph::vertex(VertexId v) const {
    if (!has_vertex(v)) throw GraphError("unknown vertex " + to_string(v));
    return *vertices_[v.value];
}

CatalogGraph::Arc* CatalogGraph::find_arc(VertexId v, VertexId w) {
    for (auto& a : vertex(v).arcs)
        if (a.to == w) return &a;
    return nullptr;
}

const CatalogGraph::Arc* CatalogGraph::find_arc(VertexId v, VertexId w) const {
    for (const auto& a : vertex(v).arcs)
        if (a.to == w) return &a;
    return nullptr;
}

const CatalogGraph::Arc& CatalogGraph::arc(VertexId v, VertexId w) const {
    const Arc* a = find_arc(v, w);
    if (!a) throw GraphError("vertices " + to_string(v) + " and " + to_string(w) + " are not adjacent");
    return *a;
}

bool CatalogGraph::has_edge(VertexId v, VertexId w) const {
    return has_vertex(v) && has_vertex(w) && find_arc(v, w) != nullptr;
}

std::size_t CatalogGraph::degree(VertexId v) const {
    return vertex(v).arcs.size();
}

std::vector<VertexId> CatalogGraph::neighbors(VertexId v) const {
    std::vector<VertexId> out;
    for (const auto& a : vertex(v).arcs) out.push_back(a.to);
    return out;
}

bool CatalogGraph::shares_catalog(VertexId v, VertexId w) const {
    return vertex(v).shared == vertex(w).shared;
}

const Catalog& CatalogGraph::catalog(VertexId v) const {
    return vertex(v).shared->catalog;
}

VertexId CatalogGraph::fresh_id() {
    while (!free_ids_.empty()) {
        const VertexId id{free_ids_.back()};
        free_ids_.pop_back();
        if (!has_vertex(id)) return id;
    }
    return VertexId{static_cast<std::uint32_t>(vertices_.size())};
}

void CatalogGraph::place_vertex(VertexId id, std::shared_ptr<Shared> shared) {
    if (has_vertex(id)) throw GraphError("vertex " + to_string(id) + " already exists");
    if (id.value >= vertices_.size()) vertices_.resize(id.value + 1);
    shared->members.push_back(id);
    vertices_[id.value] = Vertex{std::move(shared), {}};
    ++vertex_count_;
}

VertexId CatalogGraph::add_vertex(std::span<const Entry> entries) {
    const VertexId id = fresh_id();
    add_vertex(id, entries);
    return id;
}

void CatalogGraph::add_vertex(VertexId id, std::span<const Entry> entries) {
    if (has_vertex(id)) throw GraphError("vertex " + to_string(id) + " already exists");
    const auto by_key = [](const Entry& a, const Entry& b) { return a.key < b.key; };
    std::shared_ptr<Shared> shared;
    if (std::is_sorted(entries.begin(), entries.end(), by_key)) {
        shared = std::make_shared<Shared>(Shared{Catalog(entries, next_seed()), {}});
    } else {
        std::vector<Entry> sorted(entries.begin(), entries.end());
        std::stable_sort(sorted.begin(), sorted.end(), by_key);
        shared = std::make_shared<Shared>(Shared{Catalog(sorted, next_seed()), {}});
    }
    place_vertex(id, std::move(shared));
}

VertexId CatalogGraph::add_shared_vertex(VertexId like) {
    const VertexId id = fresh_id();
    add_shared_vertex(id, like);
    return id;
}

void CatalogGraph::add_shared_vertex(VertexId id, VertexId like) {
    place_vertex(id, vertex(like).shared);
}

void CatalogGraph::remove_vertex(VertexId v) {
    for (VertexId w : neighbors(v)) remove_edge(v, w);
    auto& members = vertex(v).shared->members;
    members.erase(std::find(members.begin(), members.end(), v));
    vertices_[v.value].reset();
    --vertex_count_;
    free_ids_.push_back(v.value);
}

void CatalogGraph::rebuild_bridges(VertexId v, Arc& arc) {
    const Catalog& a = catalog(v);
    const Catalog& b = catalog(arc.to);
    arc.bridge.assign(a.slot_capacity(), kNone);
    Position pb;
    Position nb = b.first();
    for (ElementHandle h : a) {
        const Key k = a.key(h);
        while (nb && b.key(*nb) <= k) {
            pb = nb;
            nb = b.next(nb);
        }
        arc.bridge[h.slot] = pb ? pb->slot : kNone;
    }
}

void CatalogGraph::add_edge(VertexId v, VertexId w) {
    if (v == w) throw GraphError("self-loop at vertex " + to_string(v));
    if (has_edge(v, w))
        throw GraphError("edge " + to_string(v) + "-" + to_string(w) + " already exists");
    for (VertexId u : {v, w})
        if (vertex(u).arcs.size() >= max_degree_)
            throw GraphError("vertex " + to_string(u) + " exceeds max degree " + std::to_string(max_degree_));
    vertex(v).arcs.push_back(Arc{w, {}});
    vertex(w).arcs.push_back(Arc{v, {}});
    rebuild_bridges(v, vertex(v).arcs.back());
    rebuild_bridges(w, vertex(w).arcs.back());
    ++edge_count_;
}

void CatalogGraph::remove_edge(VertexId v, VertexId w) {
    if (!has_edge(v, w))
        throw GraphError("vertices " + to_string(v) + " and " + to_string(w) + " are not adjacent");
    for (auto [from, to] : {std::pair{v, w}, std::pair{w, v}}) {
        auto& arcs = vertex(from).arcs;
        arcs.erase(std::find_if(arcs.begin(), arcs.end(), [to = to](const Arc& a) { return a.to == to; }));
    }
    --edge_count_;
}

ElementHandle CatalogGraph::insert(VertexId v, Key k, std::uint64_t tag) {
    Shared& shared = *vertex(v).shared;
    Catalog& cat = shared.catalog;
    const ElementHandle e = cat.insert(k, tag);
    const std::uint32_t cap = cat.slot_capacity();
    for (VertexId u : shared.members)
        for (auto& a : vertex(u).arcs)
            if (a.bridge.size() < cap) a.bridge.resize(cap, kNone);

    const Position succ = cat.next(e);
    const std::optional<Key> limit = succ ? std::optional<Key>(cat.key(*succ)) : std::nullopt;
    for (VertexId u : shared.members) {
        for (auto& out : vertex(u).arcs) {
            const Catalog& other = catalog(out.to);
            const Position target = other.pred(k);
            out.bridge[e.slot] = target ? target->slot : kNone;

            // Elements of the neighbor in [k, key(succ)) now bridge to e.
            Arc& in = *find_arc(out.to, u);
            for (Position a = other.next(other.pred_strict(k)); a && (!limit || other.key(*a) < *limit);
                 a = other.next(a))
                in.bridge[a->slot] = e.slot;
        }
    }
    return e;
}

Key CatalogGraph::erase(VertexId v, ElementHandle h) {
    Shared& shared = *vertex(v).shared;
    Catalog& cat = shared.catalog;
    const Key k = cat.key(h);
    const Position succ = cat.next(h);
    const std::optional<Key> limit = succ ? std::optional<Key>(cat.key(*succ)) : std::nullopt;
    const Position before = cat.prev(h);
    const std::uint32_t replacement = before ? before->slot : kNone;

    for (VertexId u : shared.members) {
        for (auto& out : vertex(u).arcs) {
            const Catalog& other = catalog(out.to);
            Arc& in = *find_arc(out.to, u);
            for (Position a = other.next(other.pred_strict(k)); a && (!limit || other.key(*a) < *limit);
                 a = other.next(a)) {
                if (*a != h && in.bridge[a->slot] == h.slot) in.bridge[a->slot] = replacement;
            }
            out.bridge[h.slot] = kNone;
        }
    }
    return cat.erase(h);
}

Position CatalogGraph::bridge(VertexId v, VertexId w, Position at_v) const {
    const Arc& a = arc(v, w);
    if (!at_v) return std::nullopt;
    if (!catalog(v).contains(*at_v)) {
        (void)catalog(v).key(*at_v);  // throws the precise error
    }
    const std::uint32_t target = a.bridge[at_v->slot];
    if (target == kNone) return std::nullopt;
    return catalog(w).handle_at(target);
}

FingerResult CatalogGraph::cascade_step(VertexId v, VertexId w, Position at_v, Key x) const {
    return catalog(w).finger_search(bridge(v, w, at_v), x);
}

std::size_t CatalogGraph::local_discrepancy(VertexId v, VertexId w, Key x) const {
    (void)arc(v, w);
    const Catalog& a = catalog(v);
    const Catalog& b = catalog(w);
    const Position lo = a.pred(x);
    const Position hi = a.next(lo);
    const std::optional<Key> limit = hi ? std::optional<Key>(a.key(*hi)) : std::nullopt;
    Position p = lo ? b.next(b.pred_strict(a.key(*lo))) : b.first();
    std::size_t count = 0;
    for (; p && (!limit || b.key(*p) < *limit); p = b.next(p)) ++count;
    return 2 + count;
}

PathResult CatalogGraph::path_search(std::span<const VertexId> path, Key x, SearchOptions options) const {
    if (path.empty()) throw GraphError("path search needs a non-empty path");
    for (std::size_t i = 0; i + 1 < path.size(); ++i) (void)arc(path[i], path[i + 1]);

    PathResult out;
    out.hits.reserve(path.size());
    out.trace.edges.reserve(path.size() - 1);
    const FingerResult entry = catalog(path[0]).locate(x);
    out.trace.entry_steps = entry.steps;
    out.hits.push_back({path[0], entry.position});
    for (std::size_t i = 0; i + 1 < path.size(); ++i) {
        const VertexId v = path[i], w = path[i + 1];
        const FingerResult step = cascade_step(v, w, out.hits.back().position, x);
        EdgeCost cost{v, w, step.steps, 0};
        if (options.measure_discrepancy) cost.delta = local_discrepancy(v, w, x);
        out.trace.total_finger_steps += cost.finger_steps;
        out.trace.total_delta += cost.delta;
        out.trace.edges.push_back(cost);
        out.hits.push_back({w, step.position});
    }
    return out;
}

std::optional<std::string> CatalogGraph::audit() const {
    for (VertexId v : vertices()) {
        const Vertex& vx = vertex(v);
        if (vx.arcs.size() > max_degree_) return "vertex " + to_string(v) + " exceeds max degree";
        for (const auto& out : vx.arcs) {
            if (!find_arc(out.to, v))
                return "edge " + to_string(v) + "->" + to_string(out.to) + " has no reverse bridge map";
            const Catalog& a = catalog(v);
            const Catalog& b = catalog(out.to);
            std::unordered_map<std::uint32_t, long> rank;
            long r = 0;
            for (ElementHandle h : b) rank[h.slot] = r++;
            long last = -1;
            for (ElementHandle h : a) {
                const Position expect = b.pred(a.key(h));
                const std::uint32_t want = expect ? expect->slot : kNone;
                const std::uint32_t got = h.slot < out.bridge.size() ? out.bridge[h.slot] : kNone - 1;
                if (got != want)
                    return "bridge " + to_string(v) + "->" + to_string(out.to) + " of key " +
                           a.key(h).to_string() + " is stale";
                const long gr = got == kNone ? -1 : rank.at(got);
                if (gr < last)
                    return "bridge " + to_string(v) + "->" + to_string(out.to) + " is not monotone";
                last = gr;
            }
        }
    }
    return std::nullopt;
}

}  // namespace dfc
