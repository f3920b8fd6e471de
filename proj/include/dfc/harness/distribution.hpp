#ifndef DFC_HARNESS_DISTRIBUTION_HPP
#define DFC_HARNESS_DISTRIBUTION_HPP

#include <cstddef>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "dfc/geometry/point_set.hpp"

namespace dfc::harness {

/// Bad command-line or experiment parameters.
class UsageError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

enum class DistKind { UniformSquare, GaussianCluster, GridJitter, AdversarialGeometric };

/**
 * Synthetic point generator. Written as KIND[:p1,p2]:
 *   uniform_square                  uniform on [0,1)^2
 *   gaussian_cluster[:k,sigma]      k centers uniform in the square, normal noise (defaults 8, 0.05)
 *   grid_jitter[:eps]               ceil(sqrt n) square grid, cells jittered by eps of a cell (default 0.1)
 *   adversarial_geometric[:r]       one random center, offsets u * r^-g / n with g ~ Geometric(1/2) (default 2)
 *
 * Output depends only on (distribution, n, seed). Uniform variates come from
 * the top 53 bits of mt19937_64 and normals from Box-Muller, so the streams
 * do not depend on the standard library's distribution classes.
 */
struct Distribution {
    DistKind kind = DistKind::UniformSquare;
    std::size_t clusters = 8;
    double sigma = 0.05;
    double epsilon = 0.1;
    double ratio = 2.0;

    static Distribution parse(std::string_view text);
    std::string to_string() const;
};

std::vector<geometry::Point> sample_points(const Distribution& dist, std::size_t n, std::uint64_t seed);

/// Sorted one-dimensional catalog number `index` of a path experiment: the x
/// coordinates of sample_points. Under adversarial_geometric even-indexed
/// catalogs are uniform instead, so every edge joins a clustered catalog to a
/// spread one.
std::vector<double> sample_catalog(const Distribution& dist, std::size_t n, std::uint64_t seed, std::size_t index);

/// Uniform double in [0, 1) from the top 53 bits of one draw.
inline double unit_uniform(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// H_n = 1 + 1/2 + ... + 1/n.
double harmonic(std::size_t n);

}  // namespace dfc::harness

#endif
