#pragma once

#include <cstdint>
#include <string_view>

namespace bq {

// Substream seed for a (seed, purpose, index) triple. FNV-1a over the tag,
// folded with splitmix64 so nearby seeds give unrelated streams.
[[nodiscard]] std::uint64_t derive_seed(std::uint64_t seed, std::string_view purpose,
                                        std::uint64_t index = 0);

// xoshiro256** with portable uniform and normal draws, so that identical
// seeds give identical doubles on every platform.
class Rng {
public:
    explicit Rng(std::uint64_t seed);

    std::uint64_t next();
    // Uniform on [0, 1) with 53 random bits.
    double uniform();
    // Uniform integer in [0, n).
    std::uint64_t below(std::uint64_t n);
    double normal();

private:
    std::uint64_t s_[4];
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace bq
