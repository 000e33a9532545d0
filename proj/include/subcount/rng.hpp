#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

namespace subcount {

// Counter-based splittable PRNG (SplitMix64). Every random decision in the
// project flows from one root seed through named sub-streams so that serial
// and parallel runs, and independent re-implementations, agree bit for bit.
//
// Stream derivation:
//   h      = FNV-1a64(name)
//   base   = splitmix64_mix(root ^ h)
//   stream = SplitMix64 seeded with splitmix64_mix(base + index * GAMMA)
// where GAMMA = 0x9E3779B97F4A7C15 (the SplitMix64 increment).

inline constexpr std::uint64_t kSplitMix64Gamma = 0x9E3779B97F4A7C15ULL;

constexpr std::uint64_t splitmix64_mix(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xBF58476D1CE4E5B9ULL;
    z ^= z >> 27;
    z *= 0x94D049BB133111EBULL;
    z ^= z >> 31;
    return z;
}

constexpr std::uint64_t fnv1a64(std::string_view s) {
    std::uint64_t h = 0xCBF29CE484222325ULL;
    for (char c : s) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001B3ULL;
    }
    return h;
}

class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        state_ += kSplitMix64Gamma;
        return splitmix64_mix(state_);
    }

    // Uniform in [0, 1) with 53 random bits.
    double next_double() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    // Uniform in [-1, 1).
    double next_symmetric() { return 2.0 * next_double() - 1.0; }

    // Unbiased uniform in [0, n). Classic rejection on the top residue.
    std::uint64_t next_below(std::uint64_t n);

    // Fisher-Yates, descending.
    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            std::size_t j = static_cast<std::size_t>(next_below(i));
            std::swap(v[i - 1], v[j]);
        }
    }

private:
    std::uint64_t state_;
};

// Seed for sub-stream `index` of the named stream under `root`.
std::uint64_t stream_seed(std::uint64_t root, std::string_view name,
                          std::uint64_t index);

inline Rng named_stream(std::uint64_t root, std::string_view name,
                        std::uint64_t index = 0) {
    return Rng(stream_seed(root, name, index));
}

}  // namespace subcount
