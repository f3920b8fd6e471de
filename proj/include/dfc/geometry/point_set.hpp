#ifndef DFC_GEOMETRY_POINT_SET_HPP
#define DFC_GEOMETRY_POINT_SET_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "dfc/catalog_graph.hpp"

namespace dfc::geometry {

struct Point {
    double x = 0.0;
    double y = 0.0;
    std::uint64_t id = 0;

    friend bool operator==(const Point&, const Point&) = default;
};

enum class Quadrant { NE, NW, SW, SE };

inline constexpr Quadrant kQuadrants[] = {Quadrant::NE, Quadrant::NW, Quadrant::SW, Quadrant::SE};

const char* to_string(Quadrant q);

/// Staircase of a quadrant, sorted by increasing x. Along it y strictly
/// decreases for SW and NE and strictly increases for NW and SE.
struct MaximaSet {
    std::vector<Point> points;

    std::size_t size() const { return points.size(); }
    bool empty() const { return points.empty(); }
};

/// Minkowski L_p distance, p in [1, inf].
class Metric {
public:
    explicit Metric(double p);

    static Metric manhattan() { return Metric(1.0); }
    static Metric euclidean() { return Metric(2.0); }
    static Metric chebyshev();

    double p() const { return p_; }
    double distance(double ax, double ay, double bx, double by) const;
    double distance(const Point& a, const Point& b) const { return distance(a.x, a.y, b.x, b.y); }

private:
    double p_;
};

class PointSetError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct QueryStats {
    std::size_t candidates = 0;     // staircase points examined
    std::size_t box_points = 0;     // points checked by the NN tie pass
    std::size_t nodes_visited = 0;  // tree nodes entered by staircase extraction
    std::size_t finger_steps = 0;
};

/**
 * Dynamic planar point set answering dominated-maxima (staircase) queries in
 * any quadrant and exact nearest-neighbor queries under Minkowski metrics.
 *
 * Points sit at the leaves of a weight-balanced binary tree ordered by
 * (x, id). Every node is a vertex of a CatalogGraph whose catalog holds the y
 * values (tagged with point ids) of its subtree, and tree edges are graph
 * edges, so a search for a y value runs down any root-to-leaf path by
 * fractional cascading. Updates touch the O(log n) catalogs on one path;
 * a node whose heavier child exceeds kAlpha of its weight has its subtree
 * rebuilt from scratch.
 *
 * All four quadrants share one staircase walk run over reflected views: a
 * reflected x mirrors the tree traversal and a reflected y turns the closed
 * predecessor search for qy into a strict one and reads the successor.
 *
 * Quadrants are closed. NN ties go to the smallest id. Among points with
 * identical coordinates a staircase lists exactly one.
 */
class PointSet {
public:
    static constexpr double kAlpha = 0.7;

    explicit PointSet(std::uint64_t seed = 0x9e3779b9);
    /// Bulk construction in O(n log n); ids must be unique.
    explicit PointSet(std::span<const Point> points, std::uint64_t seed = 0x9e3779b9);

    std::size_t size() const { return leaf_of_.size(); }
    bool empty() const { return leaf_of_.empty(); }
    bool contains(std::uint64_t id) const { return leaf_of_.count(id) != 0; }
    std::optional<Point> find(std::uint64_t id) const;
    /// All points in (x, id) order.
    std::vector<Point> points() const;

    void insert(const Point& p);
    Point erase(std::uint64_t id);

    MaximaSet dominated_maxima(double qx, double qy, Quadrant quadrant, QueryStats* stats = nullptr) const;
    std::optional<Point> nearest(double qx, double qy, const Metric& metric, QueryStats* stats = nullptr) const;
    /// Size of the staircase of the whole set toward (+inf, +inf).
    std::size_t maxima_count() const;
    /// Points with x_lo <= x <= x_hi and y_lo <= y <= y_hi, in no particular order.
    std::vector<Point> points_in_box(double x_lo, double x_hi, double y_lo, double y_hi) const;

    struct NodeView {
        VertexId vertex;
        std::optional<VertexId> parent;
        std::optional<VertexId> left;
        std::optional<VertexId> right;
        std::size_t size = 0;
        std::optional<Point> point;  // leaves only
        std::vector<Entry> catalog;
    };
    /// Every node in preorder, for structural audits.
    std::vector<NodeView> snapshot() const;

    const CatalogGraph& graph() const { return graph_; }

private:
    static constexpr std::uint32_t kNil = 0xFFFFFFFFu;

    struct Node {
        std::uint32_t parent = kNil;
        std::uint32_t left = kNil;
        std::uint32_t right = kNil;
        std::uint32_t size = 1;
        Point split;  // largest (x, id) of the left subtree
        Point point;  // leaves only
        bool leaf() const { return left == kNil; }
    };

    struct Staircase;

    Node& node(std::uint32_t v) { return nodes_[v]; }
    const Node& node(std::uint32_t v) const { return nodes_[v]; }
    std::uint32_t new_vertex(std::span<const Entry> entries);
    std::uint32_t build_range(std::span<const Point> sorted, std::vector<Entry>& ys);
    void rebuild(std::uint32_t v);
    void rebalance(std::span<const std::uint32_t> path);
    void collect(std::uint32_t v, std::vector<Point>& out) const;
    void drop_descendants(std::uint32_t v);
    ElementHandle locate_point(std::uint32_t v, const Point& p) const;
    const Point& point_by_id(std::uint64_t id) const;

    CatalogGraph graph_;
    std::vector<Node> nodes_;
    std::uint32_t root_ = kNil;
    std::unordered_map<std::uint64_t, std::uint32_t> leaf_of_;
};

/// True when a precedes b in the tree's (x, id) order.
inline bool xid_less(const Point& a, const Point& b) {
    return a.x < b.x || (a.x == b.x && a.id < b.id);
}

}  // namespace dfc::geometry

#endif
