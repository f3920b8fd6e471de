#include <cmath>
#include <map>
#include <random>
#include <vector>

#include "doctest.h"
#include "calibration.hpp"
#include "dfc/catalog.hpp"
#include "oracles.hpp"

using dfc::Catalog;
using dfc::Entry;
using dfc::Key;

namespace {

Key K(std::int64_t v) { return Key::from_int(v); }

std::vector<std::int64_t> keys_of(const Catalog& c) {
    std::vector<std::int64_t> out;
    for (const auto& e : c.entries()) out.push_back(e.key.to_int());
    return out;
}

Catalog make(std::initializer_list<std::int64_t> ks, std::uint64_t seed = 3) {
    std::vector<Entry> es;
    std::uint64_t tag = 0;
    for (auto k : ks) es.push_back({K(k), tag++});
    return Catalog(es, seed);
}

}  // namespace

TEST_CASE("insert into an empty catalog") {
    Catalog c;
    auto h = c.insert(K(5));
    CHECK(keys_of(c) == std::vector<std::int64_t>{5});
    CHECK(c.key(h) == K(5));
    CHECK(c.size() == 1);
}

TEST_CASE("insert lands at the sorted position") {
    Catalog c = make({10, 30});
    auto h = c.insert(K(20), 99);
    CHECK(keys_of(c) == std::vector<std::int64_t>{10, 20, 30});
    CHECK(oracle::rank_of(c, h) == 1);
}

TEST_CASE("duplicates go after existing equal keys") {
    Catalog c = make({10, 30});
    auto h = c.insert(K(10), 7);
    CHECK(keys_of(c) == std::vector<std::int64_t>{10, 10, 30});
    CHECK(oracle::rank_of(c, h) == 1);
    CHECK(c.tag(*c.pred(K(10))) == 7);
}

TEST_CASE("delete returns the key and keeps other handles") {
    Catalog c;
    auto h10 = c.insert(K(10));
    auto h20 = c.insert(K(20));
    auto h30 = c.insert(K(30));
    CHECK(c.erase(h20) == K(20));
    CHECK(keys_of(c) == std::vector<std::int64_t>{10, 30});
    CHECK(c.key(h10) == K(10));
    CHECK(c.key(h30) == K(30));

    Catalog one;
    auto h5 = one.insert(K(5));
    CHECK(one.erase(h5) == K(5));
    CHECK(one.empty());
    CHECK(!one.first());
}

TEST_CASE("deleting twice is detected") {
    Catalog c = make({1, 2});
    auto h = *c.pred(K(1));
    c.erase(h);
    CHECK_THROWS_AS(c.erase(h), dfc::UseAfterDelete);
    CHECK_THROWS_AS(c.key(h), dfc::UseAfterDelete);
    CHECK(!c.contains(h));
    // The freed slot is reused; the stale handle must still be rejected.
    auto fresh = c.insert(K(1));
    CHECK(fresh.slot == h.slot);
    CHECK_THROWS_AS(c.key(h), dfc::UseAfterDelete);
}

TEST_CASE("sentinels cannot be inserted") {
    Catalog c;
    CHECK_THROWS_AS(c.insert(Key::minus_inf()), dfc::InvalidKey);
    CHECK_THROWS_AS(c.insert(Key::plus_inf()), dfc::InvalidKey);
}

TEST_CASE("handles from another catalog are rejected") {
    Catalog a = make({1});
    Catalog b = make({1});
    CHECK_THROWS_AS(b.key(*a.first()), dfc::ContractViolation);
}

TEST_CASE("closed predecessor") {
    Catalog c = make({10, 20, 30});
    CHECK(c.key(*c.pred(K(21))) == K(20));
    CHECK(!c.pred(K(5)));
    CHECK(c.key(*c.pred(K(20))) == K(20));
    CHECK(c.key(*c.pred(Key::plus_inf())) == K(30));
    CHECK(!c.pred(Key::minus_inf()));
    CHECK(c.key(*c.pred_strict(K(20))) == K(10));
}

TEST_CASE("finger search examples") {
    Catalog c = make({12, 14, 25});
    auto from = *c.pred(K(12));
    auto r = c.finger_search(from, K(21));
    CHECK(c.key(*r.position) == K(14));
    CHECK(r.steps <= 4);

    auto at = *c.pred(K(21));
    auto z = c.finger_search(at, K(21));
    CHECK(z.position == c.pred(K(21)));
    CHECK(z.steps == 0);

    auto fromInf = c.finger_search(std::nullopt, K(25));
    CHECK(c.key(*fromInf.position) == K(25));
    CHECK(!c.finger_search(std::nullopt, K(3)).position);
}

TEST_CASE("finger search rejects a start past the target") {
    Catalog c = make({12, 14, 25});
    CHECK_THROWS_AS(c.finger_search(*c.pred(K(25)), K(20)), dfc::ContractViolation);
    CHECK_THROWS_AS(c.finger_search(*c.pred(K(12)), Key::minus_inf()), dfc::ContractViolation);
}

TEST_CASE("bulk build matches incremental inserts and rejects unsorted input") {
    std::vector<Entry> es{{K(1), 0}, {K(1), 1}, {K(4), 2}, {K(9), 3}};
    Catalog bulk(es, 5);
    CHECK(bulk.entries() == es);
    Catalog inc(5);
    for (const auto& e : es) inc.insert(e.key, e.tag);
    CHECK(inc.entries() == es);
    std::vector<Entry> bad{{K(2), 0}, {K(1), 1}};
    CHECK_THROWS_AS(Catalog(bad, 1), dfc::ContractViolation);
}

TEST_CASE("prev and next walk the level-0 list") {
    Catalog c = make({3, 6, 9});
    auto mid = *c.pred(K(6));
    CHECK(c.key(*c.prev(mid)) == K(3));
    CHECK(c.key(*c.next(mid)) == K(9));
    CHECK(!c.prev(*c.first()));
    CHECK(!c.next(c.last()));
    CHECK(c.next(std::nullopt) == c.first());
}

TEST_CASE("property: random workloads against a sorted-array oracle") {
    std::mt19937_64 rng(2024);
    for (int trial = 0; trial < 40; ++trial) {
        Catalog c(rng());
        oracle::SortedArray model;
        std::map<std::uint64_t, std::pair<dfc::ElementHandle, Key>> live;
        std::uint64_t next_tag = 0;
        const int range = trial % 2 ? 50 : 100000;
        for (int op = 0; op < 600; ++op) {
            const bool do_insert = live.empty() || rng() % 3 != 0;
            if (do_insert) {
                Key k = K(static_cast<std::int64_t>(rng() % range) - range / 2);
                auto h = c.insert(k, next_tag);
                model.insert(k, next_tag);
                live[next_tag++] = {h, k};
            } else {
                auto it = live.begin();
                std::advance(it, static_cast<long>(rng() % live.size()));
                CHECK(c.erase(it->second.first) == it->second.second);
                model.erase_tag(it->first);
                live.erase(it);
            }
        }
        // Order and multiset, including insertion-order ties.
        REQUIRE(c.entries() == model.items());
        CHECK(c.size() == model.items().size());
        // Handle stability.
        for (const auto& [tag, hk] : live) {
            CHECK(c.key(hk.first) == hk.second);
            CHECK(c.tag(hk.first) == tag);
        }
        // Predecessor correctness.
        for (int q = 0; q < 1000; ++q) {
            Key x = K(static_cast<std::int64_t>(rng() % (range + 20)) - range / 2 - 10);
            const long idx = model.pred_index(x);
            auto p = c.pred(x);
            if (idx < 0) {
                CHECK(!p);
            } else {
                REQUIRE(p);
                CHECK(c.tag(*p) == model.items()[static_cast<std::size_t>(idx)].tag);
            }
        }
    }
}

TEST_CASE("property: finger search agrees with pred and costs O(log d)") {
    std::mt19937_64 rng(77);
    std::vector<double> ratio;
    std::vector<double> from_inf_steps, locate_steps;
    int trials = 0;
    while (trials < 10000) {
        const std::size_t n = 1 + rng() % 2048;
        std::vector<Entry> es;
        std::int64_t v = 0;
        for (std::size_t i = 0; i < n; ++i) {
            v += static_cast<std::int64_t>(rng() % 4);
            es.push_back({K(v), i});
        }
        Catalog c(es, rng());
        std::vector<dfc::ElementHandle> handles(c.begin(), c.end());
        for (int q = 0; q < 20; ++q, ++trials) {
            const long from_rank = static_cast<long>(rng() % (n + 1)) - 1;
            dfc::Position from;
            if (from_rank >= 0) from = handles[static_cast<std::size_t>(from_rank)];
            const std::int64_t lo = from ? c.key(*from).to_int() : -3;
            // Bias toward short distances so every scale of d is represented.
            const std::int64_t span = std::int64_t{1} << (rng() % 14);
            const Key x = K(lo + static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(span)));
            auto r = c.finger_search(from, x);
            REQUIRE(r.position == c.pred(x));
            const long d = oracle::rank_of(c, r.position) - from_rank;
            REQUIRE(d >= 0);
            ratio.push_back(static_cast<double>(r.steps) / (1.0 + std::log2(static_cast<double>(d) + 2.0)));
        }
        auto full = c.finger_search(std::nullopt, c.key(*c.last()));
        CHECK(full.position == c.last());
        from_inf_steps.push_back(static_cast<double>(full.steps));
        locate_steps.push_back(static_cast<double>(c.locate(c.key(*c.last())).steps));
    }
    const double m = oracle::mean(ratio);
    const double p99 = oracle::percentile(ratio, 0.99);
    MESSAGE("finger mean ratio " << m << ", p99 " << p99);
    CHECK(m <= calibration::kFingerC0);
    CHECK(p99 <= 3.0 * calibration::kFingerC0);
    // From -inf the search is a full search: same order of cost as a top-down locate.
    const double fi = oracle::mean(from_inf_steps), lo = oracle::mean(locate_steps);
    MESSAGE("from -inf " << fi << " vs locate " << lo);
    CHECK(fi <= 2.0 * lo + 2.0);
    CHECK(lo <= 2.0 * fi + 2.0);
}
