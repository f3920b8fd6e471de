#include "dfc/harness/cli.hpp"

#include <algorithm>
#include <fstream>
#include <limits>
#include <memory>
#include <random>
#include <sstream>

#include <fmt/format.h>

#include "CLI11.hpp"
#include "dfc/graph_io.hpp"
#include "dfc/geometry/point_io.hpp"
#include "dfc/harness/experiments.hpp"
#include "dfc/random.hpp"

namespace dfc::harness {

namespace {

struct Options {
    std::uint64_t seed = 1;
    std::vector<std::size_t> n;
    std::size_t k = 64;
    std::size_t trials = 0;
    std::size_t queries = 0;
    std::size_t ops = 0;
    std::string dist = "uniform_square";
    std::string points;
    std::string graph;
    std::string out;
    std::string format = "csv";
    std::size_t max_degree = CatalogGraph::kDefaultMaxDegree;
    unsigned threads = 1;
    bool identical = false;
};

class CheckFailed : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

void add_common(CLI::App* cmd, Options& o) {
    cmd->add_option("--seed", o.seed, "Random seed");
    cmd->add_option("--out", o.out, "Write output to FILE instead of stdout");
}

void add_report_format(CLI::App* cmd, Options& o) {
    cmd->add_option("--format", o.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
}

void add_sizes(CLI::App* cmd, Options& o, const char* help) {
    cmd->add_option("--n", o.n, help)->delimiter(',')->check(CLI::PositiveNumber);
}

std::vector<std::size_t> sizes_or(const Options& o, std::vector<std::size_t> fallback) {
    return o.n.empty() ? fallback : o.n;
}

std::vector<geometry::Point> load_points(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw UsageError(fmt::format("cannot open point file '{}'", path));
    try {
        return geometry::read_points(in);
    } catch (const geometry::PointParseError& e) {
        throw UsageError(fmt::format("{}: {}", path, e.what()));
    }
}

void emit_report(const ExperimentReport& r, const Options& o, std::ostream& out) {
    if (o.format == "json")
        r.write_json(out);
    else
        r.write_csv(out);
}

void run_nn_check(const Options& o, std::ostream& out) {
    std::vector<geometry::Point> pts;
    if (!o.points.empty())
        pts = load_points(o.points);
    else
        pts = sample_points(Distribution::parse(o.dist), sizes_or(o, {1024}).front(), o.seed);
    const std::size_t queries = o.queries ? o.queries : 1000;

    geometry::PointSet set(pts, o.seed);
    std::vector<geometry::Point> live = pts;
    double lo_x = 0, hi_x = 1, lo_y = 0, hi_y = 1;
    if (!pts.empty()) {
        const auto [mnx, mxx] = std::minmax_element(pts.begin(), pts.end(), [](auto& a, auto& b) { return a.x < b.x; });
        const auto [mny, mxy] = std::minmax_element(pts.begin(), pts.end(), [](auto& a, auto& b) { return a.y < b.y; });
        const double mx = std::max(0.1 * (mxx->x - mnx->x), 1e-9), my = std::max(0.1 * (mxy->y - mny->y), 1e-9);
        lo_x = mnx->x - mx, hi_x = mxx->x + mx, lo_y = mny->y - my, hi_y = mxy->y + my;
    }

    const geometry::Metric metrics[] = {geometry::Metric::manhattan(), geometry::Metric::euclidean(),
                                        geometry::Metric(3.0), geometry::Metric::chebyshev()};
    std::size_t mismatches[4] = {0, 0, 0, 0};
    std::mt19937_64 rng(derive_seed(o.seed, 0xc4ec));
    std::uint64_t next_id = pts.size();
    for (std::size_t q = 0; q < queries; ++q) {
        if (o.ops && q % std::max<std::size_t>(1, queries / o.ops) == 0) {
            if (!live.empty() && rng() % 2) {
                const std::size_t i = rng() % live.size();
                set.erase(live[i].id);
                live[i] = live.back();
                live.pop_back();
            } else {
                const geometry::Point p{lo_x + unit_uniform(rng) * (hi_x - lo_x),
                                        lo_y + unit_uniform(rng) * (hi_y - lo_y), next_id++};
                set.insert(p);
                live.push_back(p);
            }
        }
        const double qx = lo_x + unit_uniform(rng) * (hi_x - lo_x);
        const double qy = lo_y + unit_uniform(rng) * (hi_y - lo_y);
        for (int m = 0; m < 4; ++m) {
            const auto got = set.nearest(qx, qy, metrics[m]);
            std::optional<geometry::Point> want;
            double best = 0;
            for (const auto& p : live) {
                const double d = metrics[m].distance(qx, qy, p.x, p.y);
                if (!want || d < best || (d == best && p.id < want->id)) {
                    want = p;
                    best = d;
                }
            }
            if (got.has_value() != want.has_value() || (got && got->id != want->id)) ++mismatches[m];
        }
    }
    std::size_t total = 0;
    out << fmt::format("points {}\nqueries {}\nupdates {}\n", pts.size(), queries, o.ops);
    const char* names[] = {"1", "2", "3", "inf"};
    for (int m = 0; m < 4; ++m) {
        out << fmt::format("p={} mismatches {}\n", names[m], mismatches[m]);
        total += mismatches[m];
    }
    out << (total == 0 ? "result all-match\n" : "result MISMATCH\n");
    if (total) throw CheckFailed(fmt::format("{} nearest-neighbor mismatches", total));
}

void run_graph_check(const Options& o, std::ostream& out) {
    std::ifstream in(o.graph);
    if (!in) throw UsageError(fmt::format("cannot open graph file '{}'", o.graph));
    CatalogGraph g = [&] {
        try {
            return read_graph(in, o.max_degree, o.seed);
        } catch (const ParseError& e) {
            throw UsageError(fmt::format("{}: {}", o.graph, e.what()));
        } catch (const GraphError& e) {
            throw UsageError(fmt::format("{}: {}", o.graph, e.what()));
        }
    }();
    out << fmt::format("vertices {}\nedges {}\n", g.vertex_count(), g.edge_count());
    if (auto problem = g.audit()) {
        out << "audit FAILED: " << *problem << '\n';
        throw CheckFailed(*problem);
    }
    out << "audit ok\n";

    const auto vertices = g.vertices();
    std::size_t mismatches = 0;
    const std::size_t queries = o.queries ? o.queries : 1000;
    if (!vertices.empty()) {
        std::int64_t lo = 0, hi = 0;
        bool any = false;
        for (VertexId v : vertices) {
            const Catalog& c = g.catalog(v);
            if (c.empty()) continue;
            const std::int64_t a = c.key(*c.first()).to_int(), b = c.key(*c.last()).to_int();
            lo = any ? std::min(lo, a) : a;
            hi = any ? std::max(hi, b) : b;
            any = true;
        }
        std::mt19937_64 rng(derive_seed(o.seed, 0x9c));
        for (std::size_t q = 0; q < queries; ++q) {
            std::vector<VertexId> path{vertices[rng() % vertices.size()]};
            const std::size_t len = rng() % 16;
            for (std::size_t s = 0; s < len; ++s) {
                const auto nb = g.neighbors(path.back());
                if (nb.empty()) break;
                path.push_back(nb[rng() % nb.size()]);
            }
            const std::uint64_t span = static_cast<std::uint64_t>(hi) - static_cast<std::uint64_t>(lo) + 3;
            const Key x = Key::from_int(static_cast<std::int64_t>(static_cast<std::uint64_t>(lo) - 1 + rng() % span));
            const PathResult r = g.path_search(path, x, SearchOptions{false});
            for (const PathHit& h : r.hits)
                if (h.position != g.catalog(h.vertex).pred(x)) ++mismatches;
        }
    }
    out << fmt::format("path queries {}\nmismatches {}\n", queries, mismatches);
    out << (mismatches == 0 ? "result ok\n" : "result MISMATCH\n");
    if (mismatches) throw CheckFailed(fmt::format("{} path search mismatches", mismatches));
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    Options o;
    CLI::App app{"Dynamic fractional cascading experiments and checks", "dfc"};
    app.require_subcommand(1);

    auto* disc = app.add_subcommand("discrepancy", "Sum of log2 local discrepancy along a path of catalogs");
    add_common(disc, o);
    add_report_format(disc, o);
    add_sizes(disc, o, "Catalog sizes (comma-separated, default 4096)");
    disc->add_option("--k", o.k, "Path length in catalogs")->check(CLI::Range(std::size_t{2}, std::size_t{1} << 20));
    disc->add_option("--queries", o.queries, "Queries per trial (default 1000)");
    disc->add_option("--trials", o.trials, "Independent catalog sets per size (default 1)");
    disc->add_option("--dist", o.dist, "Distribution KIND[:params]");
    disc->add_flag("--identical", o.identical, "Use copies of one catalog along the whole path");
    disc->add_option("--threads", o.threads, "Worker threads");

    auto* maxima = app.add_subcommand("maxima", "Monte-Carlo count of maxima against H_n");
    add_common(maxima, o);
    add_report_format(maxima, o);
    add_sizes(maxima, o, "Set sizes (comma-separated, default 1024)");
    maxima->add_option("--trials", o.trials, "Trials per size (default 200)");
    maxima->add_option("--dist", o.dist, "Distribution KIND[:params]");
    maxima->add_option("--threads", o.threads, "Worker threads");

    auto* scaling = app.add_subcommand("nn-scaling", "Update and NN query cost as n grows");
    add_common(scaling, o);
    add_report_format(scaling, o);
    add_sizes(scaling, o, "Set sizes (comma-separated, default 1024,4096,16384,65536)");
    scaling->add_option("--ops", o.ops, "Insert/query/delete rounds per size (default 1000)");
    scaling->add_option("--dist", o.dist, "Distribution KIND[:params]");

    auto* nn = app.add_subcommand("nn-check", "Compare NN answers with a linear scan for p = 1, 2, 3, inf");
    add_common(nn, o);
    nn->add_option("--points", o.points, "Point file (x,y per line); generated when absent");
    add_sizes(nn, o, "Generated set size (default 1024)");
    nn->add_option("--dist", o.dist, "Distribution KIND[:params] for generated sets");
    nn->add_option("--queries", o.queries, "Number of queries (default 1000)");
    nn->add_option("--ops", o.ops, "Random inserts/deletes interleaved with the queries");

    auto* gc = app.add_subcommand("graph-check", "Load a graph file, audit bridges, check path searches");
    add_common(gc, o);
    gc->add_option("--graph", o.graph, "Graph file")->required();
    gc->add_option("--max-degree", o.max_degree, "Degree bound enforced by the loader")->check(CLI::PositiveNumber);
    gc->add_option("--queries", o.queries, "Random path searches (default 1000)");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        app.exit(e, out, err);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        err << app.help();
        return kExitUsage;
    }

    std::ofstream file;
    if (!o.out.empty()) {
        file.open(o.out);
        if (!file) {
            err << "error: cannot open output file '" << o.out << "'\n";
            return kExitUsage;
        }
    }
    std::ostream& sink = o.out.empty() ? out : file;

    try {
        if (disc->parsed()) {
            DiscrepancyParams p;
            p.dist = Distribution::parse(o.dist);
            p.k = o.k;
            p.n_list = sizes_or(o, {4096});
            p.queries = o.queries ? o.queries : 1000;
            p.trials = o.trials ? o.trials : 1;
            p.seed = o.seed;
            p.identical = o.identical;
            p.threads = o.threads;
            emit_report(experiment_discrepancy_sum(p), o, sink);
        } else if (maxima->parsed()) {
            MaximaParams p;
            p.dist = Distribution::parse(o.dist);
            p.n_list = sizes_or(o, {1024});
            p.trials = o.trials ? o.trials : 200;
            p.seed = o.seed;
            p.threads = o.threads;
            emit_report(experiment_maxima_count(p), o, sink);
        } else if (scaling->parsed()) {
            NnScalingParams p;
            p.dist = Distribution::parse(o.dist);
            p.n_list = sizes_or(o, {1024, 4096, 16384, 65536});
            p.ops = o.ops ? o.ops : 1000;
            p.seed = o.seed;
            emit_report(experiment_nn_scaling(p), o, sink);
        } else if (nn->parsed()) {
            run_nn_check(o, sink);
        } else if (gc->parsed()) {
            run_graph_check(o, sink);
        }
    } catch (const UsageError& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const CheckFailed& e) {
        err << "check failed: " << e.what() << '\n';
        return kExitCheckFailed;
    }
    sink.flush();
    return kExitOk;
}

}  // namespace dfc::harness
