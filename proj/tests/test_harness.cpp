#include <cmath>
#include <map>
#include <sstream>
#include <string>

#include "doctest.h"
#include "json.hpp"
#include "dfc/harness/distribution.hpp"
#include "dfc/harness/experiments.hpp"
#include "dfc/harness/report.hpp"

using namespace dfc::harness;

namespace {

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
    std::vector<std::vector<std::string>> rows;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        std::vector<std::string> cells;
        std::stringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) cells.push_back(cell);
        rows.push_back(cells);
    }
    return rows;
}

}  // namespace

TEST_CASE("distribution strings") {
    CHECK(Distribution::parse("uniform_square").kind == DistKind::UniformSquare);
    auto g = Distribution::parse("gaussian_cluster:4,0.25");
    CHECK(g.kind == DistKind::GaussianCluster);
    CHECK(g.clusters == 4);
    CHECK(g.sigma == 0.25);
    CHECK(Distribution::parse("grid_jitter:0.5").epsilon == 0.5);
    CHECK(Distribution::parse("adversarial_geometric:3").ratio == 3);
    CHECK(Distribution::parse("adversarial_geometric").ratio == 2);
    for (const char* s : {"uniform_square", "gaussian_cluster:4,0.25", "grid_jitter:0.5", "adversarial_geometric:3"})
        CHECK(Distribution::parse(Distribution::parse(s).to_string()).to_string() == Distribution::parse(s).to_string());
    for (const char* bad : {"", "cube", "uniform_square:1", "gaussian_cluster:0", "gaussian_cluster:2.5",
                            "gaussian_cluster:2,-1", "grid_jitter:x", "adversarial_geometric:1", "grid_jitter:1,2",
                            "gaussian_cluster:"})
        CHECK_THROWS_AS(Distribution::parse(bad), UsageError);
}

TEST_CASE("generators are deterministic and shaped as documented") {
    for (const char* s : {"uniform_square", "gaussian_cluster", "grid_jitter", "adversarial_geometric"}) {
        const auto d = Distribution::parse(s);
        auto a = sample_points(d, 500, 9);
        CHECK(a.size() == 500);
        CHECK(a == sample_points(d, 500, 9));
        CHECK(a != sample_points(d, 500, 10));
        for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i].id == i);
    }
    for (const auto& p : sample_points(Distribution{}, 1000, 3)) {
        CHECK(p.x >= 0);
        CHECK(p.x < 1);
    }
    // Without jitter the grid puts points at cell centers.
    auto grid = sample_points(Distribution::parse("grid_jitter:0"), 9, 1);
    CHECK(grid[4].x == doctest::Approx(0.5));
    CHECK(grid[4].y == doctest::Approx(0.5));
    CHECK(grid[8].x == doctest::Approx(5.0 / 6));
    // Adversarial offsets stay within 1/n of the center.
    auto adv = sample_points(Distribution::parse("adversarial_geometric"), 100, 2);
    auto [lo, hi] = std::minmax_element(adv.begin(), adv.end(), [](auto& a, auto& b) { return a.x < b.x; });
    CHECK(hi->x - lo->x <= 1.0 / 100);

    auto c0 = sample_catalog(Distribution::parse("adversarial_geometric"), 200, 5, 0);
    auto c1 = sample_catalog(Distribution::parse("adversarial_geometric"), 200, 5, 1);
    CHECK(std::is_sorted(c0.begin(), c0.end()));
    CHECK(c0.back() - c0.front() > 0.5);
    CHECK(c1.back() - c1.front() <= 1.0 / 200);
}

TEST_CASE("harmonic numbers") {
    CHECK(harmonic(0) == 0);
    CHECK(harmonic(1) == 1);
    CHECK(harmonic(4) == doctest::Approx(25.0 / 12));
    // ln n + gamma + 1/(2n) - 1/(12 n^2)
    const double n = 1024;
    CHECK(harmonic(1024) == doctest::Approx(std::log(n) + 0.5772156649015329 + 1 / (2 * n) - 1 / (12 * n * n)).epsilon(1e-12));
}

TEST_CASE("summaries") {
    const std::vector<double> v{4, 1, 3, 2};
    auto a = summarize(v);
    CHECK(a.mean == 2.5);
    CHECK(a.stddev == doctest::Approx(std::sqrt(5.0 / 3)));
    CHECK(a.min == 1);
    CHECK(a.max == 4);
    CHECK(a.p50 == 2);
    CHECK(a.p99 == 4);
    const std::vector<double> one{7};
    CHECK(summarize(one).stddev == 0);
    CHECK(summarize(one).p99 == 7);
    CHECK(summarize({}).mean == 0);
}

TEST_CASE("CSV aggregates are recomputable from the trial rows") {
    MaximaParams p;
    p.n_list = {16, 64};
    p.trials = 37;
    p.seed = 4;
    auto report = experiment_maxima_count(p);
    std::ostringstream out;
    report.write_csv(out);
    auto rows = parse_csv(out.str());
    REQUIRE(rows.front() == std::vector<std::string>{"kind", "group", "count", "h_n", "ratio"});

    std::map<std::string, std::vector<std::vector<double>>> trials;
    std::map<std::pair<std::string, std::string>, std::vector<std::string>> aggs;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const auto& r = rows[i];
        REQUIRE(r.size() == 5);
        if (r[0] == "trial") {
            std::vector<double> vals;
            for (std::size_t c = 2; c < r.size(); ++c) vals.push_back(std::stod(r[c]));
            trials[r[1]].push_back(vals);
        } else {
            aggs[{r[0], r[1]}] = {r.begin() + 2, r.end()};
        }
    }
    REQUIRE(trials.size() == 2);
    for (const auto& [group, recs] : trials) {
        CHECK(recs.size() == 37);
        for (std::size_t f = 0; f < 3; ++f) {
            std::vector<double> col;
            for (const auto& r : recs) col.push_back(r[f]);
            const Aggregate a = summarize(col);
            CHECK(std::stod(aggs[{"mean", group}][f]) == a.mean);
            CHECK(std::stod(aggs[{"stddev", group}][f]) == a.stddev);
            CHECK(std::stod(aggs[{"min", group}][f]) == a.min);
            CHECK(std::stod(aggs[{"max", group}][f]) == a.max);
            CHECK(std::stod(aggs[{"p50", group}][f]) == a.p50);
            CHECK(std::stod(aggs[{"p99", group}][f]) == a.p99);
        }
    }
}

TEST_CASE("JSON report holds one object per trial and the aggregates") {
    MaximaParams p;
    p.n_list = {32};
    p.trials = 5;
    auto report = experiment_maxima_count(p);
    std::ostringstream out;
    report.write_json(out);
    auto doc = nlohmann::json::parse(out.str());
    CHECK(doc["experiment"] == "maxima");
    CHECK(doc["params"]["trials"] == "5");
    REQUIRE(doc["trials"].size() == 5);
    std::vector<double> counts;
    for (const auto& t : doc["trials"]) {
        CHECK(t["group"] == "32");
        counts.push_back(t["count"].get<double>());
    }
    CHECK(doc["aggregate"]["32"]["count"]["mean"].get<double>() == summarize(counts).mean);
}

TEST_CASE("a single point is always one maximum") {
    MaximaParams p;
    p.n_list = {1};
    p.trials = 20;
    auto r = experiment_maxima_count(p);
    for (double c : r.column("1", "count")) CHECK(c == 1);
    CHECK(r.aggregate("1", "ratio").mean == 1);
}

TEST_CASE("identical catalogs give delta 3 on every edge") {
    for (std::size_t k : {2, 5}) {
        DiscrepancyParams p;
        p.k = k;
        p.n_list = {300};
        p.queries = 200;
        p.identical = true;
        auto r = experiment_discrepancy_sum(p);
        // x never falls below the smallest key, so a- exists and is the only
        // neighbor element in [a-, a+).
        for (double s : r.column("300", "sum_log2_delta")) CHECK(s == doctest::Approx((k - 1) * std::log2(3.0)));
        for (double d : r.column("300", "max_delta")) CHECK(d == 3);
    }
}

TEST_CASE("reports are deterministic and independent of the thread count") {
    DiscrepancyParams p;
    p.k = 8;
    p.n_list = {64, 128};
    p.queries = 50;
    p.trials = 3;
    p.seed = 99;
    std::ostringstream a, b, c;
    experiment_discrepancy_sum(p).write_csv(a);
    experiment_discrepancy_sum(p).write_csv(b);
    p.threads = 3;
    experiment_discrepancy_sum(p).write_csv(c);
    CHECK(a.str() == b.str());
    CHECK(a.str() == c.str());

    MaximaParams m;
    m.n_list = {100};
    m.trials = 10;
    std::ostringstream d, e;
    experiment_maxima_count(m).write_json(d);
    m.threads = 4;
    experiment_maxima_count(m).write_json(e);
    CHECK(d.str() == e.str());
}

TEST_CASE("experiment parameter validation") {
    DiscrepancyParams p;
    p.k = 1;
    CHECK_THROWS_AS(experiment_discrepancy_sum(p), UsageError);
    p.k = 4;
    p.n_list = {0};
    CHECK_THROWS_AS(experiment_discrepancy_sum(p), UsageError);
    MaximaParams m;
    m.trials = 0;
    CHECK_THROWS_AS(experiment_maxima_count(m), UsageError);
}

TEST_CASE("nn scaling runs down to a single point") {
    NnScalingParams p;
    p.n_list = {1, 256};
    p.ops = 30;
    auto r = experiment_nn_scaling(p);
    CHECK(r.records().size() == 60);
    for (double c : r.column("1", "candidates")) CHECK(c >= 1);
    for (double c : r.column("256", "outside_candidates")) CHECK(c >= 1);
}

TEST_CASE("run_trials propagates failures") {
    CHECK_THROWS_AS(run_trials(8, 3,
                               [](std::size_t i) -> std::vector<Record> {
                                   if (i == 5) throw std::runtime_error("boom");
                                   return {};
                               }),
                    std::runtime_error);
}
