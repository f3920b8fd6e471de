#ifndef DFC_RANDOM_HPP
#define DFC_RANDOM_HPP

#include <cstdint>
#include <limits>

namespace dfc {

// SplitMix64. Eight bytes of state, which matters when every node of a large
// tree owns its own catalog and coin source.
class SplitMix64 {
public:
    using result_type = std::uint64_t;

    constexpr explicit SplitMix64(std::uint64_t seed = 0) : state_(seed) {}

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

    constexpr result_type operator()() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

private:
    std::uint64_t state_;
};

/// Deterministic child seed for (seed, index) pairs.
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
    SplitMix64 g(seed ^ (index * 0xd1b54a32d192ed03ULL));
    g();
    return g();
}

}  // namespace dfc

#endif
