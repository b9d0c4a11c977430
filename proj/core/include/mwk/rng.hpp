#pragma once

#include <cstdint>
#include <random>

namespace mwk::numerics {

/// Deterministic random stream.
///
/// Bits come from std::mt19937_64 (the 64-bit Mersenne Twister, a twisted
/// generalized feedback shift register whose output sequence is fixed by the
/// C++ standard). Uniforms take the top 53 bits: u = (bits >> 11) * 2^-53, so
/// u is in [0, 1). Gaussians use the Box-Muller transform on two uniforms,
/// returning the cosine branch first and caching the sine branch. Nothing
/// depends on the standard library's distribution classes, so a seed yields
/// the same stream on every conforming platform.
///
/// A stream has a single owner. Independent streams for parallel tasks come
/// from split(), which seeds a new stream with splitmix64(seed + k).
class RngStream {
public:
    explicit RngStream(std::uint64_t seed);

    std::uint64_t next_u64();
    double uniform();
    double gaussian();
    RngStream split(std::uint64_t k) const;

    std::uint64_t seed() const noexcept { return seed_; }

private:
    std::uint64_t seed_;
    std::mt19937_64 engine_;
    double cached_ = 0.0;
    bool has_cached_ = false;
};

/// splitmix64 finalizer, used to derive child seeds.
std::uint64_t splitmix64(std::uint64_t x) noexcept;

}  // namespace mwk::numerics
