#include "dfc/harness/distribution.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <numbers>
#include <optional>
#include <random>

#include <fmt/format.h>

#include "dfc/random.hpp"

namespace dfc::harness {

namespace {

class Variates {
public:
    explicit Variates(std::uint64_t seed) : rng_(seed) {}

    double uniform() { return unit_uniform(rng_); }

    double normal() {
        if (spare_) {
            const double v = *spare_;
            spare_.reset();
            return v;
        }
        const double u1 = 1.0 - uniform();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        spare_ = r * std::sin(2 * std::numbers::pi * u2);
        return r * std::cos(2 * std::numbers::pi * u2);
    }

    // Failures before the first success of a fair coin.
    unsigned geometric() { return static_cast<unsigned>(std::countr_zero(rng_() | (std::uint64_t{1} << 63))); }

    std::uint64_t below(std::uint64_t n) { return rng_() % n; }

private:
    std::mt19937_64 rng_;
    std::optional<double> spare_;
};

double parse_number(std::string_view token, std::string_view text) {
    double v = 0;
    auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
    if (token.empty() || ec != std::errc() || ptr != token.data() + token.size() || !std::isfinite(v))
        throw UsageError(fmt::format("bad parameter '{}' in distribution '{}'", token, text));
    return v;
}

std::vector<double> parse_params(std::string_view list, std::string_view text) {
    std::vector<double> out;
    while (true) {
        const auto comma = list.find(',');
        out.push_back(parse_number(list.substr(0, comma), text));
        if (comma == std::string_view::npos) break;
        list.remove_prefix(comma + 1);
    }
    return out;
}

}  // namespace

Distribution Distribution::parse(std::string_view text) {
    const auto colon = text.find(':');
    const std::string_view kind = text.substr(0, colon);
    std::vector<double> p;
    if (colon != std::string_view::npos) p = parse_params(text.substr(colon + 1), text);
    const auto arity = [&](std::size_t most) {
        if (p.size() > most)
            throw UsageError(fmt::format("distribution '{}' takes at most {} parameters", kind, most));
    };

    Distribution d;
    if (kind == "uniform_square") {
        arity(0);
        d.kind = DistKind::UniformSquare;
    } else if (kind == "gaussian_cluster") {
        arity(2);
        d.kind = DistKind::GaussianCluster;
        if (!p.empty()) {
            if (p[0] < 1 || p[0] != std::floor(p[0]))
                throw UsageError("gaussian_cluster needs a positive integer cluster count");
            d.clusters = static_cast<std::size_t>(p[0]);
        }
        if (p.size() > 1) {
            if (p[1] <= 0) throw UsageError("gaussian_cluster needs sigma > 0");
            d.sigma = p[1];
        }
    } else if (kind == "grid_jitter") {
        arity(1);
        d.kind = DistKind::GridJitter;
        if (!p.empty()) {
            if (p[0] < 0) throw UsageError("grid_jitter needs eps >= 0");
            d.epsilon = p[0];
        }
    } else if (kind == "adversarial_geometric") {
        arity(1);
        d.kind = DistKind::AdversarialGeometric;
        if (!p.empty()) {
            if (p[0] <= 1) throw UsageError("adversarial_geometric needs r > 1");
            d.ratio = p[0];
        }
    } else {
        throw UsageError(fmt::format("unknown distribution '{}'", kind));
    }
    return d;
}

std::string Distribution::to_string() const {
    switch (kind) {
    case DistKind::UniformSquare: return "uniform_square";
    case DistKind::GaussianCluster: return fmt::format("gaussian_cluster:{},{}", clusters, sigma);
    case DistKind::GridJitter: return fmt::format("grid_jitter:{}", epsilon);
    case DistKind::AdversarialGeometric: return fmt::format("adversarial_geometric:{}", ratio);
    }
    return "?";
}

std::vector<geometry::Point> sample_points(const Distribution& dist, std::size_t n, std::uint64_t seed) {
    Variates v(seed);
    std::vector<geometry::Point> out;
    out.reserve(n);
    switch (dist.kind) {
    case DistKind::UniformSquare:
        for (std::size_t i = 0; i < n; ++i) {
            const double x = v.uniform();
            out.push_back({x, v.uniform(), i});
        }
        break;
    case DistKind::GaussianCluster: {
        std::vector<std::pair<double, double>> centers;
        for (std::size_t c = 0; c < dist.clusters; ++c) {
            const double x = v.uniform();
            centers.emplace_back(x, v.uniform());
        }
        for (std::size_t i = 0; i < n; ++i) {
            const auto& [cx, cy] = centers[v.below(centers.size())];
            const double x = cx + dist.sigma * v.normal();
            out.push_back({x, cy + dist.sigma * v.normal(), i});
        }
        break;
    }
    case DistKind::GridJitter: {
        const auto side = static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(n))));
        const double cell = side ? 1.0 / static_cast<double>(side) : 1.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double jx = dist.epsilon * (v.uniform() - 0.5);
            const double jy = dist.epsilon * (v.uniform() - 0.5);
            out.push_back({(static_cast<double>(i % side) + 0.5 + jx) * cell,
                           (static_cast<double>(i / side) + 0.5 + jy) * cell, i});
        }
        break;
    }
    case DistKind::AdversarialGeometric: {
        const double cx = v.uniform();
        const double cy = v.uniform();
        const double scale = 1.0 / static_cast<double>(std::max<std::size_t>(n, 1));
        for (std::size_t i = 0; i < n; ++i) {
            const double rx = std::pow(dist.ratio, -static_cast<double>(v.geometric())) * scale;
            const double ry = std::pow(dist.ratio, -static_cast<double>(v.geometric())) * scale;
            const double x = cx + v.uniform() * rx;
            out.push_back({x, cy + v.uniform() * ry, i});
        }
        break;
    }
    }
    return out;
}

std::vector<double> sample_catalog(const Distribution& dist, std::size_t n, std::uint64_t seed, std::size_t index) {
    const std::uint64_t s = derive_seed(seed, index);
    const Distribution d = dist.kind == DistKind::AdversarialGeometric && index % 2 == 0 ? Distribution{} : dist;
    std::vector<double> out;
    out.reserve(n);
    for (const auto& p : sample_points(d, n, s)) out.push_back(p.x);
    std::sort(out.begin(), out.end());
    return out;
}

double harmonic(std::size_t n) {
    double h = 0;
    for (std::size_t i = n; i >= 1; --i) h += 1.0 / static_cast<double>(i);
    return h;
}

}  // namespace dfc::harness
