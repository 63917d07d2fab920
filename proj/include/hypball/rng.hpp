#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <span>

namespace hypball::rng {

/// Philox4x32-10 counter-based generator.
///
/// A draw is a pure function of (key, counter), so any sample of any stream
/// can be reproduced without replaying the stream. Streams are addressed by
/// (seed, stream id); samples within a stream by a 64-bit index.
class Philox {
public:
    using Block = std::array<std::uint32_t, 4>;

    Philox(std::uint64_t seed, std::uint64_t stream) noexcept
        : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
          stream_(stream) {}

    /// Four independent 32-bit words for sample `index`.
    [[nodiscard]] Block block(std::uint64_t index) const noexcept {
        Block ctr{static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32),
                  static_cast<std::uint32_t>(stream_), static_cast<std::uint32_t>(stream_ >> 32)};
        std::array<std::uint32_t, 2> key = key_;
        for (int round = 0; round < 10; ++round) {
            ctr = single_round(ctr, key);
            key[0] += kWeyl0;
            key[1] += kWeyl1;
        }
        return ctr;
    }

    /// Two uniforms in the open interval (0, 1) with 53-bit resolution.
    [[nodiscard]] std::array<double, 2> uniform2(std::uint64_t index) const noexcept {
        const Block b = block(index);
        return {to_unit(b[0], b[1]), to_unit(b[2], b[3])};
    }

    /// Two independent standard normals (Box-Muller on one block).
    [[nodiscard]] std::array<double, 2> normal2(std::uint64_t index) const noexcept {
        const auto [u1, u2] = uniform2(index);
        const double radius = std::sqrt(-2.0 * std::log(u1));
        const double angle = 2.0 * std::numbers::pi * u2;
        return {radius * std::cos(angle), radius * std::sin(angle)};
    }

    [[nodiscard]] std::uint64_t stream() const noexcept { return stream_; }

private:
    static constexpr std::uint32_t kMul0 = 0xD2511F53u;
    static constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
    static constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
    static constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

    static Block single_round(const Block& ctr, const std::array<std::uint32_t, 2>& key) noexcept {
        const std::uint64_t p0 = static_cast<std::uint64_t>(kMul0) * ctr[0];
        const std::uint64_t p1 = static_cast<std::uint64_t>(kMul1) * ctr[2];
        return {static_cast<std::uint32_t>(p1 >> 32) ^ ctr[1] ^ key[0], static_cast<std::uint32_t>(p1),
                static_cast<std::uint32_t>(p0 >> 32) ^ ctr[3] ^ key[1], static_cast<std::uint32_t>(p0)};
    }

    static double to_unit(std::uint32_t hi, std::uint32_t lo) noexcept {
        const std::uint64_t bits = ((static_cast<std::uint64_t>(hi) << 32) | lo) >> 11;
        return (static_cast<double>(bits) + 0.5) * 0x1.0p-53;
    }

    std::array<std::uint32_t, 2> key_;
    std::uint64_t stream_;
};

/// Uniform point on the unit sphere of C^n (real dimension 2n), written into `out`.
/// Normalizes 2n independent standard normals.
inline void sphere_point(const Philox& gen, std::uint64_t index, std::span<std::complex<double>> out) noexcept {
    const std::size_t n = out.size();
    double norm2 = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        // Sub-sample k of sample `index`; n is small, so the spacing never collides.
        const auto g = gen.normal2(index * 64 + k);
        out[k] = {g[0], g[1]};
        norm2 += g[0] * g[0] + g[1] * g[1];
    }
    const double inv = 1.0 / std::sqrt(norm2);
    for (auto& c : out) c *= inv;
}

/// Stream identifiers. Every consumer of randomness owns one so that
/// different estimators never share draws unless they ask to.
enum class Stream : std::uint64_t {
    sphere_directions = 1,
    ball_rejection = 2,
    hyperbolic_joint = 3,
    test_family = 4,
    test_points = 5,
};

inline Philox make(std::uint64_t seed, Stream stream, std::uint64_t sub = 0) noexcept {
    return Philox(seed, (static_cast<std::uint64_t>(stream) << 40) ^ sub);
}

}  // namespace hypball::rng
