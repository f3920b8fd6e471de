#include "dfc/geometry/point_set.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <tuple>
#include <utility>
#include <unordered_set>

namespace dfc::geometry {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

Key ykey(double y) {
    return Key::from_double(y);
}

Entry entry_of(const Point& p) {
    return {ykey(p.y), p.id};
}

void check_point(const Point& p) {
    if (!std::isfinite(p.x) || !std::isfinite(p.y))
        throw PointSetError("point " + std::to_string(p.id) + " has a non-finite coordinate");
}

struct View {
    bool flip_x;
    bool flip_y;
};

View view_of(Quadrant q) {
    switch (q) {
    case Quadrant::SW: return {false, false};
    case Quadrant::SE: return {true, false};
    case Quadrant::NW: return {false, true};
    case Quadrant::NE: return {true, true};
    }
    return {false, false};
}

}  // namespace

const char* to_string(Quadrant q) {
    switch (q) {
    case Quadrant::NE: return "NE";
    case Quadrant::NW: return "NW";
    case Quadrant::SW: return "SW";
    case Quadrant::SE: return "SE";
    }
    return "?";
}

Metric::Metric(double p) : p_(p) {
    if (!(p >= 1.0)) throw std::invalid_argument("metric exponent must be at least 1");
}

Metric Metric::chebyshev() {
    return Metric(kInf);
}

double Metric::distance(double ax, double ay, double bx, double by) const {
    const double dx = std::fabs(ax - bx);
    const double dy = std::fabs(ay - by);
    if (p_ == 1.0) return dx + dy;
    if (p_ == 2.0) return std::sqrt(dx * dx + dy * dy);
    if (std::isinf(p_)) return std::max(dx, dy);
    return std::pow(std::pow(dx, p_) + std::pow(dy, p_), 1.0 / p_);
}

// Staircase walk over one reflected view of the tree.
struct PointSet::Staircase {
    const PointSet& set;
    View view;
    Key search;
    Key threshold;
    QueryStats& stats;
    std::vector<Point> out;

    void emit(const Point& p) {
        if (!out.empty() && out.back().x == p.x) out.pop_back();
        out.push_back(p);
        threshold = ykey(p.y);
    }

    void solve(std::uint32_t v, Position pos) {
        ++stats.nodes_visited;
        const Catalog& c = set.graph_.catalog(VertexId{v});
        const Position cand = view.flip_y ? c.next(pos) : pos;
        if (!cand) return;
        const Key cy = c.key(*cand);
        if (view.flip_y ? cy >= threshold : cy <= threshold) return;
        const Node& n = set.node(v);
        if (n.leaf()) {
            emit(n.point);
            return;
        }
        const std::uint32_t near = view.flip_x ? n.left : n.right;
        const std::uint32_t far = view.flip_x ? n.right : n.left;
        for (std::uint32_t child : {near, far}) {
            const FingerResult r = set.graph_.cascade_step(VertexId{v}, VertexId{child}, pos, search);
            stats.finger_steps += r.steps;
            solve(child, r.position);
        }
    }
};

PointSet::PointSet(std::uint64_t seed) : graph_(3, seed) {}

PointSet::PointSet(std::span<const Point> points, std::uint64_t seed) : graph_(3, seed) {
    std::vector<Point> sorted(points.begin(), points.end());
    std::unordered_set<std::uint64_t> ids;
    for (const Point& p : sorted) {
        check_point(p);
        if (!ids.insert(p.id).second)
            throw PointSetError("duplicate point id " + std::to_string(p.id));
    }
    if (sorted.empty()) return;
    std::sort(sorted.begin(), sorted.end(), xid_less);
    std::vector<Entry> ys;
    root_ = build_range(sorted, ys);
}

std::uint32_t PointSet::new_vertex(std::span<const Entry> entries) {
    const std::uint32_t v = graph_.add_vertex(entries).value;
    if (v >= nodes_.size()) nodes_.resize(v + 1);
    nodes_[v] = Node{};
    return v;
}

std::uint32_t PointSet::build_range(std::span<const Point> sorted, std::vector<Entry>& ys) {
    if (sorted.size() == 1) {
        ys.assign(1, entry_of(sorted[0]));
        const std::uint32_t v = new_vertex(ys);
        node(v).point = sorted[0];
        leaf_of_[sorted[0].id] = v;
        return v;
    }
    const std::size_t mid = sorted.size() / 2;
    std::vector<Entry> left_ys;
    std::vector<Entry> right_ys;
    const std::uint32_t l = build_range(sorted.first(mid), left_ys);
    const std::uint32_t r = build_range(sorted.subspan(mid), right_ys);
    ys.clear();
    ys.reserve(left_ys.size() + right_ys.size());
    std::merge(left_ys.begin(), left_ys.end(), right_ys.begin(), right_ys.end(), std::back_inserter(ys),
               [](const Entry& a, const Entry& b) { return a.key < b.key; });
    const std::uint32_t v = new_vertex(ys);
    Node& n = node(v);
    n.left = l;
    n.right = r;
    n.size = static_cast<std::uint32_t>(sorted.size());
    n.split = sorted[mid - 1];
    node(l).parent = v;
    node(r).parent = v;
    graph_.add_edge(VertexId{v}, VertexId{l});
    graph_.add_edge(VertexId{v}, VertexId{r});
    return v;
}

std::optional<Point> PointSet::find(std::uint64_t id) const {
    auto it = leaf_of_.find(id);
    if (it == leaf_of_.end()) return std::nullopt;
    return node(it->second).point;
}

const Point& PointSet::point_by_id(std::uint64_t id) const {
    return node(leaf_of_.at(id)).point;
}

void PointSet::collect(std::uint32_t v, std::vector<Point>& out) const {
    const Node& n = node(v);
    if (n.leaf()) {
        out.push_back(n.point);
        return;
    }
    collect(n.left, out);
    collect(n.right, out);
}

std::vector<Point> PointSet::points() const {
    std::vector<Point> out;
    out.reserve(size());
    if (root_ != kNil) collect(root_, out);
    return out;
}

void PointSet::drop_descendants(std::uint32_t v) {
    Node& n = node(v);
    if (n.leaf()) return;
    const std::uint32_t l = n.left;
    const std::uint32_t r = n.right;
    n.left = n.right = kNil;
    for (std::uint32_t c : {l, r}) {
        drop_descendants(c);
        graph_.remove_vertex(VertexId{c});
    }
}

void PointSet::rebuild(std::uint32_t v) {
    std::vector<Point> pts;
    pts.reserve(node(v).size);
    collect(v, pts);
    drop_descendants(v);
    const std::size_t mid = pts.size() / 2;
    std::vector<Entry> ys;
    const std::uint32_t l = build_range(std::span<const Point>(pts).first(mid), ys);
    const std::uint32_t r = build_range(std::span<const Point>(pts).subspan(mid), ys);
    Node& n = node(v);
    n.left = l;
    n.right = r;
    n.split = pts[mid - 1];
    node(l).parent = v;
    node(r).parent = v;
    graph_.add_edge(VertexId{v}, VertexId{l});
    graph_.add_edge(VertexId{v}, VertexId{r});
}

void PointSet::rebalance(std::span<const std::uint32_t> path) {
    for (std::uint32_t v : path) {
        const Node& n = node(v);
        if (n.leaf()) continue;
        const double heavy = std::max(node(n.left).size, node(n.right).size);
        if (heavy > kAlpha * n.size) {
            rebuild(v);
            return;
        }
    }
}

void PointSet::insert(const Point& p) {
    check_point(p);
    if (contains(p.id)) throw PointSetError("duplicate point id " + std::to_string(p.id));
    if (root_ == kNil) {
        const Entry e = entry_of(p);
        root_ = new_vertex({&e, 1});
        node(root_).point = p;
        leaf_of_[p.id] = root_;
        return;
    }
    std::vector<std::uint32_t> path;
    std::uint32_t cur = root_;
    while (!node(cur).leaf()) {
        path.push_back(cur);
        cur = xid_less(node(cur).split, p) ? node(cur).right : node(cur).left;
    }
    path.push_back(cur);

    const Point old = node(cur).point;
    const Entry old_e = entry_of(old);
    const Entry new_e = entry_of(p);
    const std::uint32_t a = new_vertex({&old_e, 1});
    const std::uint32_t b = new_vertex({&new_e, 1});
    node(a).point = old;
    node(b).point = p;
    node(a).parent = node(b).parent = cur;
    leaf_of_[old.id] = a;
    leaf_of_[p.id] = b;
    Node& leaf = node(cur);
    if (xid_less(old, p)) {
        leaf.left = a;
        leaf.right = b;
        leaf.split = old;
    } else {
        leaf.left = b;
        leaf.right = a;
        leaf.split = p;
    }
    leaf.point = Point{};
    leaf.size = 1;
    graph_.add_edge(VertexId{cur}, VertexId{a});
    graph_.add_edge(VertexId{cur}, VertexId{b});

    for (std::uint32_t v : path) {
        graph_.insert(VertexId{v}, new_e.key, p.id);
        ++node(v).size;
    }
    rebalance(path);
}

ElementHandle PointSet::locate_point(std::uint32_t v, const Point& p) const {
    const Catalog& c = graph_.catalog(VertexId{v});
    const Key k = ykey(p.y);
    for (Position pos = c.pred(k); pos && c.key(*pos) == k; pos = c.prev(*pos))
        if (c.tag(*pos) == p.id) return *pos;
    throw std::logic_error("point " + std::to_string(p.id) + " missing from a catalog on its path");
}

Point PointSet::erase(std::uint64_t id) {
    auto it = leaf_of_.find(id);
    if (it == leaf_of_.end()) throw PointSetError("unknown point id " + std::to_string(id));
    const std::uint32_t leaf = it->second;
    const Point p = node(leaf).point;
    leaf_of_.erase(it);
    if (leaf == root_) {
        graph_.remove_vertex(VertexId{leaf});
        root_ = kNil;
        return p;
    }

    std::vector<std::uint32_t> path;
    for (std::uint32_t v = node(leaf).parent; v != kNil; v = node(v).parent) path.push_back(v);
    std::reverse(path.begin(), path.end());
    for (std::uint32_t v : path) {
        graph_.erase(VertexId{v}, locate_point(v, p));
        --node(v).size;
    }

    const std::uint32_t parent = path.back();
    const std::uint32_t sibling = node(parent).left == leaf ? node(parent).right : node(parent).left;
    graph_.remove_vertex(VertexId{leaf});
    const Node s = node(sibling);
    graph_.remove_vertex(VertexId{sibling});
    Node& pn = node(parent);
    if (s.leaf()) {
        pn.left = pn.right = kNil;
        pn.point = s.point;
        pn.size = 1;
        leaf_of_[s.point.id] = parent;
    } else {
        pn.left = s.left;
        pn.right = s.right;
        pn.split = s.split;
        pn.size = s.size;
        node(s.left).parent = parent;
        node(s.right).parent = parent;
        graph_.add_edge(VertexId{parent}, VertexId{s.left});
        graph_.add_edge(VertexId{parent}, VertexId{s.right});
    }
    rebalance(path);
    return p;
}

MaximaSet PointSet::dominated_maxima(double qx, double qy, Quadrant quadrant, QueryStats* stats) const {
    if (std::isnan(qx) || std::isnan(qy)) throw InvalidKey("query coordinates must not be NaN");
    if (root_ == kNil) return {};
    QueryStats local;
    QueryStats& st = stats ? *stats : local;
    const View view = view_of(quadrant);
    const Key search = view.flip_y ? ykey(qy).prev() : ykey(qy);

    // Split the x-range of the quadrant into one root-to-leaf path plus the
    // canonical subtrees hanging off it on the inner side.
    std::vector<VertexId> path;
    std::vector<std::pair<std::uint32_t, std::size_t>> canonical;
    std::uint32_t cur = root_;
    while (!node(cur).leaf()) {
        const Node& n = node(cur);
        path.push_back(VertexId{cur});
        if (!view.flip_x) {
            if (qx < n.split.x) {
                cur = n.left;
            } else {
                canonical.emplace_back(n.left, path.size() - 1);
                cur = n.right;
            }
        } else {
            if (qx <= n.split.x) {
                canonical.emplace_back(n.right, path.size() - 1);
                cur = n.left;
            } else {
                cur = n.right;
            }
        }
    }
    path.push_back(VertexId{cur});
    const double lx = node(cur).point.x;
    const bool leaf_inside = view.flip_x ? lx >= qx : lx <= qx;

    const PathResult pr = graph_.path_search(path, search, SearchOptions{false});
    st.finger_steps += pr.trace.entry_steps + pr.trace.total_finger_steps;

    Staircase walk{*this, view, search, view.flip_y ? Key::plus_inf() : Key::minus_inf(), st, {}};
    if (leaf_inside) walk.solve(cur, pr.hits.back().position);
    for (auto it = canonical.rbegin(); it != canonical.rend(); ++it) {
        const auto [child, index] = *it;
        const FingerResult r = graph_.cascade_step(path[index], VertexId{child}, pr.hits[index].position, search);
        st.finger_steps += r.steps;
        walk.solve(child, r.position);
    }
    if (!view.flip_x) std::reverse(walk.out.begin(), walk.out.end());
    st.candidates += walk.out.size();
    return MaximaSet{std::move(walk.out)};
}

std::size_t PointSet::maxima_count() const {
    return dominated_maxima(kInf, kInf, Quadrant::SW).size();
}

std::optional<Point> PointSet::nearest(double qx, double qy, const Metric& metric, QueryStats* stats) const {
    if (std::isnan(qx) || std::isnan(qy)) throw InvalidKey("query coordinates must not be NaN");
    if (root_ == kNil) return std::nullopt;
    QueryStats local;
    QueryStats& st = stats ? *stats : local;

    std::optional<Point> best;
    double best_d = kInf;
    const auto consider = [&](const Point& p) {
        const double d = metric.distance(qx, qy, p.x, p.y);
        if (!best || std::tie(d, p.id) < std::tie(best_d, best->id)) {
            best = p;
            best_d = d;
        }
    };
    std::vector<std::pair<Quadrant, Point>> stairs;
    for (Quadrant q : kQuadrants)
        for (const Point& p : dominated_maxima(qx, qy, q, &st).points) {
            consider(p);
            stairs.emplace_back(q, p);
        }

    // A point at distance best_d off every staircase is dominated by a tied
    // staircase point t, so it lies beyond t inside the L_inf ball of radius
    // best_d. For finite p the distance is strictly monotone in each offset and
    // only rounding can absorb an outward move: up to an ulp-scale step in the
    // dominant offset and up to best_d * (p * 2^-52)^(1/p) in the other.
    const double d = best_d;
    const double r = d + d * 1e-12;
    const double p = metric.p();
    const double absorbed = std::isinf(p) ? 1.0 : std::min(1.0, 1.01 * std::pow(p * 0x1p-52, 1.0 / p));
    const auto reach = [&](double offset) { return std::min(r, std::max(offset + d * 0x1p-40, d * absorbed)); };
    for (const auto& [q, t] : stairs) {
        if (metric.distance(qx, qy, t.x, t.y) != d) continue;
        const double ex = reach(std::fabs(t.x - qx));
        const double ey = reach(std::fabs(t.y - qy));
        const bool east = q == Quadrant::NE || q == Quadrant::SE;
        const bool north = q == Quadrant::NE || q == Quadrant::NW;
        const std::vector<Point> box = points_in_box(east ? t.x : qx - ex, east ? qx + ex : t.x,
                                                     north ? t.y : qy - ey, north ? qy + ey : t.y);
        st.box_points += box.size();
        for (const Point& b : box) consider(b);
    }
    return best;
}

std::vector<Point> PointSet::points_in_box(double x_lo, double x_hi, double y_lo, double y_hi) const {
    std::vector<Point> out;
    if (root_ == kNil || !(x_lo <= x_hi) || !(y_lo <= y_hi)) return out;
    const Key search = ykey(y_lo).prev();
    const Key top = ykey(y_hi);
    const auto inside = [&](const Point& p) {
        return p.x >= x_lo && p.x <= x_hi && p.y >= y_lo && p.y <= y_hi;
    };

    std::vector<VertexId> prefix;
    std::uint32_t split = root_;
    while (!node(split).leaf()) {
        const Node& n = node(split);
        if (x_hi < n.split.x) {
            prefix.push_back(VertexId{split});
            split = n.left;
        } else if (x_lo > n.split.x) {
            prefix.push_back(VertexId{split});
            split = n.right;
        } else {
            break;
        }
    }
    if (node(split).leaf()) {
        if (inside(node(split).point)) out.push_back(node(split).point);
        return out;
    }

    const auto report = [&](VertexId v, VertexId child, Position at_v) {
        const FingerResult r = graph_.cascade_step(v, child, at_v, search);
        const Catalog& c = graph_.catalog(child);
        for (Position b = c.next(r.position); b && c.key(*b) <= top; b = c.next(b))
            out.push_back(point_by_id(c.tag(*b)));
    };

    for (bool left_side : {true, false}) {
        std::vector<VertexId> path = prefix;
        std::vector<std::pair<std::uint32_t, std::size_t>> canonical;
        path.push_back(VertexId{split});
        std::uint32_t cur = left_side ? node(split).left : node(split).right;
        while (!node(cur).leaf()) {
            const Node& n = node(cur);
            path.push_back(VertexId{cur});
            if (left_side) {
                if (x_lo <= n.split.x) {
                    canonical.emplace_back(n.right, path.size() - 1);
                    cur = n.left;
                } else {
                    cur = n.right;
                }
            } else {
                if (x_hi >= n.split.x) {
                    canonical.emplace_back(n.left, path.size() - 1);
                    cur = n.right;
                } else {
                    cur = n.left;
                }
            }
        }
        if (inside(node(cur).point)) out.push_back(node(cur).point);
        if (canonical.empty()) continue;
        path.resize(canonical.back().second + 1);
        const PathResult pr = graph_.path_search(path, search, SearchOptions{false});
        for (const auto& [child, index] : canonical)
            report(path[index], VertexId{child}, pr.hits[index].position);
    }
    return out;
}

std::vector<PointSet::NodeView> PointSet::snapshot() const {
    std::vector<NodeView> out;
    if (root_ == kNil) return out;
    const auto opt = [](std::uint32_t v) -> std::optional<VertexId> {
        if (v == kNil) return std::nullopt;
        return VertexId{v};
    };
    std::vector<std::uint32_t> stack{root_};
    while (!stack.empty()) {
        const std::uint32_t v = stack.back();
        stack.pop_back();
        const Node& n = node(v);
        NodeView view{VertexId{v}, opt(n.parent), opt(n.left), opt(n.right), n.size, std::nullopt,
                      graph_.catalog(VertexId{v}).entries()};
        if (n.leaf()) {
            view.point = n.point;
        } else {
            stack.push_back(n.right);
            stack.push_back(n.left);
        }
        out.push_back(std::move(view));
    }
    return out;
}

}  // namespace dfc::geometry
