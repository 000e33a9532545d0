#include "subcount/rng.hpp"

#include "subcount/errors.hpp"

namespace subcount {

std::uint64_t Rng::next_below(std::uint64_t n) {
    if (n == 0) throw InternalError("next_below(0)");
    const std::uint64_t residue = static_cast<std::uint64_t>(-n) % n;  // 2^64 mod n
    const std::uint64_t threshold = 0ULL - residue;                    // largest fair draw + 1
    for (;;) {
        std::uint64_t x = next_u64();
        if (residue == 0 || x < threshold) return x % n;
    }
}

std::uint64_t stream_seed(std::uint64_t root, std::string_view name,
                          std::uint64_t index) {
    std::uint64_t base = splitmix64_mix(root ^ fnv1a64(name));
    return splitmix64_mix(base + index * kSplitMix64Gamma);
}

}  // namespace subcount
