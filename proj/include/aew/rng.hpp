#pragma once

#include <array>
#include <cstdint>
#include <span>

namespace aew {

// Philox4x32-10 (Salmon et al.); a pure function of (counter, key).
struct Philox4x32 {
    using Counter = std::array<std::uint32_t, 4>;
    using Key = std::array<std::uint32_t, 2>;
    static Counter apply(Counter ctr, Key key) noexcept;
};

std::uint64_t splitmix64(std::uint64_t x) noexcept;

// Child substream id. Used for the (step, path) and nested-path keys.
std::uint64_t derive_stream(std::uint64_t parent, std::uint64_t child) noexcept;

// Wichura's AS241 (PPND16); |error| ~ 1e-16 on (0,1).
double inverse_normal_cdf(double p) noexcept;

// Maps 64 random bits to a uniform strictly inside (0,1): the range is
// [2^-53, 1 - 2^-53], both ends representable.
inline double bits_to_open_unit(std::uint64_t bits) noexcept {
    return (static_cast<double>(bits >> 12) + 0.5) * 0x1.0p-52;
}

/// Counter-based stream of standard normals. Draw `i` of stream `s` under
/// seed `seed` is a fixed number: no state, no dependence on call order or
/// thread layout.
class NormalStream {
public:
    NormalStream(std::uint64_t seed, std::uint64_t stream) noexcept;

    double operator()(std::uint64_t index) const noexcept;

    // out[k] = (*this)(first + k)
    void fill(std::uint64_t first, std::span<double> out) const noexcept;

    std::uint64_t seed() const noexcept { return seed_; }
    std::uint64_t stream() const noexcept { return stream_; }

private:
    std::array<double, 2> pair(std::uint64_t block) const noexcept;

    std::uint64_t seed_;
    std::uint64_t stream_;
    Philox4x32::Key key_;
};

} // namespace aew
