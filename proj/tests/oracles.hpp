// Test-only reference models. Nothing here calls into the structures under test
// beyond reading their contents.
#ifndef DFC_TESTS_ORACLES_HPP
#define DFC_TESTS_ORACLES_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <vector>

#include "dfc/catalog.hpp"

namespace oracle {

// Sorted array with insertion-order tie-break (new after old).
class SortedArray {
public:
    void insert(dfc::Key k, std::uint64_t tag) {
        auto it = std::upper_bound(items_.begin(), items_.end(), k,
                                   [](dfc::Key a, const dfc::Entry& e) { return a < e.key; });
        items_.insert(it, dfc::Entry{k, tag});
    }
    bool erase_tag(std::uint64_t tag) {
        auto it = std::find_if(items_.begin(), items_.end(),
                               [&](const dfc::Entry& e) { return e.tag == tag; });
        if (it == items_.end()) return false;
        items_.erase(it);
        return true;
    }
    // Index of the closed predecessor by linear scan, -1 for none.
    long pred_index(dfc::Key x) const {
        long best = -1;
        for (std::size_t i = 0; i < items_.size(); ++i)
            if (items_[i].key <= x) best = static_cast<long>(i);
        return best;
    }
    const std::vector<dfc::Entry>& items() const { return items_; }

private:
    std::vector<dfc::Entry> items_;
};

// Closed predecessor by linear scan over any entry list.
inline std::optional<dfc::Entry> linear_pred(const std::vector<dfc::Entry>& items, dfc::Key x) {
    std::optional<dfc::Entry> best;
    for (const auto& e : items)
        if (e.key <= x) best = e;
    return best;
}

// Rank of a position by walking the catalog from the front; -1 for the -inf marker.
inline long rank_of(const dfc::Catalog& c, dfc::Position p) {
    if (!p) return -1;
    long r = 0;
    for (auto h : c) {
        if (h == *p) return r;
        ++r;
    }
    return -2;
}

inline double percentile(std::vector<double> v, double q) {
    if (v.empty()) return 0.0;
    std::sort(v.begin(), v.end());
    const auto idx = static_cast<std::size_t>(std::ceil(q * static_cast<double>(v.size()))) - 1;
    return v[std::min(idx, v.size() - 1)];
}

inline double mean(const std::vector<double>& v) {
    double s = 0;
    for (double x : v) s += x;
    return v.empty() ? 0.0 : s / static_cast<double>(v.size());
}

}  // namespace oracle

#endif
