#include "dfc/harness/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <mutex>
#include <random>
#include <string>
#include <thread>

#include <fmt/format.h>

#include "dfc/catalog_graph.hpp"
#include "dfc/geometry/point_set.hpp"
#include "dfc/random.hpp"

namespace dfc::harness {

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ns(Clock::time_point from) {
    return std::chrono::duration<double, std::nano>(Clock::now() - from).count();
}

std::string join(const std::vector<std::size_t>& values) {
    return fmt::format("{}", fmt::join(values, ","));
}

std::vector<Record> discrepancy_trial(const DiscrepancyParams& p, std::size_t n, std::size_t trial) {
    const std::uint64_t seed = derive_seed(derive_seed(p.seed, n), trial);
    std::vector<std::vector<double>> keys(p.k);
    for (std::size_t i = 0; i < p.k; ++i)
        keys[i] = p.identical && i > 0 ? keys[0] : sample_catalog(p.dist, n, seed, i);

    std::vector<VertexSpec> vertices;
    std::vector<Edge> edges;
    double lo = keys[0].front(), hi = keys[0].back();
    for (std::size_t i = 0; i < p.k; ++i) {
        VertexSpec spec{VertexId{static_cast<std::uint32_t>(i)}, {}};
        spec.entries.reserve(n);
        for (std::size_t j = 0; j < n; ++j) spec.entries.push_back({Key::from_double(keys[i][j]), j});
        vertices.push_back(std::move(spec));
        if (i > 0) edges.emplace_back(VertexId{static_cast<std::uint32_t>(i - 1)}, VertexId{static_cast<std::uint32_t>(i)});
        lo = std::min(lo, keys[i].front());
        hi = std::max(hi, keys[i].back());
    }
    const CatalogGraph g = CatalogGraph::build(vertices, edges, 3, seed);
    std::vector<VertexId> path;
    for (std::size_t i = 0; i < p.k; ++i) path.push_back(VertexId{static_cast<std::uint32_t>(i)});

    std::mt19937_64 rng(derive_seed(seed, p.k));
    std::vector<Record> out;
    out.reserve(p.queries);
    const std::string group = std::to_string(n);
    for (std::size_t q = 0; q < p.queries; ++q) {
        const double x = lo + unit_uniform(rng) * (hi - lo);
        const PathResult r = g.path_search(path, Key::from_double(x));
        double worst = 0;
        std::size_t max_delta = 0;
        for (const EdgeCost& e : r.trace.edges) {
            worst = std::max(worst, static_cast<double>(e.finger_steps) / (1.0 + std::log2(static_cast<double>(e.delta))));
            max_delta = std::max(max_delta, e.delta);
        }
        const double sum = r.trace.sum_log2_delta();
        out.push_back({group,
                       {static_cast<double>(trial), sum, sum / static_cast<double>(p.k),
                        static_cast<double>(r.trace.total_finger_steps), static_cast<double>(r.trace.entry_steps),
                        static_cast<double>(max_delta), worst}});
    }
    return out;
}

}  // namespace

std::vector<std::vector<Record>> run_trials(std::size_t count, unsigned threads,
                                            const std::function<std::vector<Record>(std::size_t)>& fn) {
    std::vector<std::vector<Record>> results(count);
    const unsigned workers = static_cast<unsigned>(std::min<std::size_t>(std::max(threads, 1u), count));
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) results[i] = fn(i);
        return results;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            for (std::size_t i; (i = next.fetch_add(1)) < count;) {
                try {
                    results[i] = fn(i);
                } catch (...) {
                    std::lock_guard lock(failure_mutex);
                    if (!failure) failure = std::current_exception();
                }
            }
        });
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
    return results;
}

ExperimentReport experiment_discrepancy_sum(const DiscrepancyParams& p) {
    if (p.k < 2) throw UsageError("discrepancy experiment needs k >= 2");
    if (p.queries < 1 || p.trials < 1) throw UsageError("discrepancy experiment needs queries and trials >= 1");
    for (std::size_t n : p.n_list)
        if (n < 1) throw UsageError("discrepancy experiment needs n >= 1");

    ExperimentReport report("discrepancy",
                            {"trial", "sum_log2_delta", "per_k", "finger_steps", "entry_steps", "max_delta",
                             "steps_per_edge_bound"});
    report.set_param("dist", p.dist.to_string());
    report.set_param("k", std::to_string(p.k));
    report.set_param("n", join(p.n_list));
    report.set_param("queries", std::to_string(p.queries));
    report.set_param("trials", std::to_string(p.trials));
    report.set_param("seed", std::to_string(p.seed));
    report.set_param("identical", p.identical ? "true" : "false");

    const std::size_t jobs = p.n_list.size() * p.trials;
    auto results = run_trials(jobs, p.threads, [&](std::size_t j) {
        return discrepancy_trial(p, p.n_list[j / p.trials], j % p.trials);
    });
    for (auto& r : results) report.append(std::move(r));
    return report;
}

ExperimentReport experiment_maxima_count(const MaximaParams& p) {
    if (p.trials < 1) throw UsageError("maxima experiment needs trials >= 1");
    ExperimentReport report("maxima", {"count", "h_n", "ratio"});
    report.set_param("dist", p.dist.to_string());
    report.set_param("n", join(p.n_list));
    report.set_param("trials", std::to_string(p.trials));
    report.set_param("seed", std::to_string(p.seed));

    const std::size_t jobs = p.n_list.size() * p.trials;
    auto results = run_trials(jobs, p.threads, [&](std::size_t j) {
        const std::size_t n = p.n_list[j / p.trials];
        const std::size_t trial = j % p.trials;
        const auto pts = sample_points(p.dist, n, derive_seed(derive_seed(p.seed, n), trial));
        const geometry::PointSet set(pts, derive_seed(p.seed, trial));
        const double count = static_cast<double>(set.maxima_count());
        const double h = harmonic(n);
        return std::vector<Record>{{std::to_string(n), {count, h, h > 0 ? count / h : 0.0}}};
    });
    for (auto& r : results) report.append(std::move(r));
    return report;
}

ExperimentReport experiment_nn_scaling(const NnScalingParams& p) {
    ExperimentReport report("nn-scaling", {"insert_ns", "delete_ns", "query_ns", "candidates", "outside_query_ns",
                                           "outside_candidates"});
    report.set_param("dist", p.dist.to_string());
    report.set_param("n", join(p.n_list));
    report.set_param("ops", std::to_string(p.ops));
    report.set_param("seed", std::to_string(p.seed));

    const geometry::Metric metric = geometry::Metric::euclidean();
    for (std::size_t n : p.n_list) {
        const std::uint64_t seed = derive_seed(p.seed, n);
        auto pts = sample_points(p.dist, n + p.ops, seed);
        geometry::PointSet set(std::span<const geometry::Point>(pts).first(n), seed);
        std::vector<std::uint64_t> live;
        for (std::size_t i = 0; i < n; ++i) live.push_back(pts[i].id);
        std::mt19937_64 rng(derive_seed(seed, 1));
        const std::string group = std::to_string(n);

        for (std::size_t op = 0; op < p.ops; ++op) {
            auto t0 = Clock::now();
            set.insert(pts[n + op]);
            const double insert_ns = elapsed_ns(t0);
            live.push_back(pts[n + op].id);

            const double qx = unit_uniform(rng), qy = unit_uniform(rng);
            geometry::QueryStats inside;
            t0 = Clock::now();
            (void)set.nearest(qx, qy, metric, &inside);
            const double query_ns = elapsed_ns(t0);

            // A point on the boundary of [-1, 2]^2.
            const double along = unit_uniform(rng) * 12.0;
            const double side = std::floor(along / 3.0), off = along - 3.0 * side - 1.0;
            const double ox = side == 0 ? off : side == 1 ? 2.0 : side == 2 ? -off + 1.0 : -1.0;
            const double oy = side == 0 ? -1.0 : side == 1 ? off : side == 2 ? 2.0 : -off + 1.0;
            geometry::QueryStats outside;
            t0 = Clock::now();
            (void)set.nearest(ox, oy, metric, &outside);
            const double outside_ns = elapsed_ns(t0);

            const std::size_t victim = rng() % live.size();
            std::swap(live[victim], live.back());
            t0 = Clock::now();
            set.erase(live.back());
            const double delete_ns = elapsed_ns(t0);
            live.pop_back();

            report.add(group, {insert_ns, delete_ns, query_ns, static_cast<double>(inside.candidates), outside_ns,
                               static_cast<double>(outside.candidates)});
        }
    }
    return report;
}

}  // namespace dfc::harness
