#pragma once

#include <array>
#include <cstdint>

namespace bpsi {

/// Philox4x32-10 counter-based generator (Salmon et al., SC'11, as shipped in
/// Random123). A block is a pure function of (counter, key), so the same
/// draw is reproduced on any platform and in any language.
///
/// Known-answer vectors (Random123 kat_vectors):
///   ctr 0,0,0,0                          key 0,0
///     -> 6627e8d5 e169c58d bc57ac4c 9b00dbd8
///   ctr ffffffff x4                      key ffffffff ffffffff
///     -> 408f276d 41c83b0e a20bc7c6 6d5451fd
///   ctr 243f6a88 85a308d3 13198a2e 03707344  key a4093822 299f31d0
///     -> d16cfe09 94fdcceb 5001e420 24126ea1
class Philox4x32 {
public:
    using Counter = std::array<std::uint32_t, 4>;
    using Key = std::array<std::uint32_t, 2>;

    static constexpr const char* kName = "philox4x32-10";
    static constexpr int kRounds = 10;

    static constexpr Counter block(Counter ctr, Key key) noexcept {
        for (int r = 0; r < kRounds; ++r) {
            if (r > 0) {
                key[0] += kWeyl0;
                key[1] += kWeyl1;
            }
            ctr = round(ctr, key);
        }
        return ctr;
    }

    static constexpr Key key_from_seed(std::uint64_t seed) noexcept {
        return {static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)};
    }

private:
    static constexpr std::uint32_t kMul0 = 0xD2511F53u;
    static constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
    static constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
    static constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

    static constexpr Counter round(const Counter& c, const Key& k) noexcept {
        const std::uint64_t p0 = static_cast<std::uint64_t>(kMul0) * c[0];
        const std::uint64_t p1 = static_cast<std::uint64_t>(kMul1) * c[2];
        const auto hi0 = static_cast<std::uint32_t>(p0 >> 32);
        const auto lo0 = static_cast<std::uint32_t>(p0);
        const auto hi1 = static_cast<std::uint32_t>(p1 >> 32);
        const auto lo1 = static_cast<std::uint32_t>(p1);
        return {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
    }
};

/// Uniform draw on the open interval (0, 1) for a given (seed, stream, index):
/// counter = {index lo, index hi, stream, 0}, 53 bits from the first two words.
inline double philox_uniform01(std::uint64_t seed, std::uint32_t stream, std::uint64_t index) {
    const Philox4x32::Counter ctr{static_cast<std::uint32_t>(index),
                                  static_cast<std::uint32_t>(index >> 32), stream, 0u};
    const auto out = Philox4x32::block(ctr, Philox4x32::key_from_seed(seed));
    const std::uint64_t bits = (static_cast<std::uint64_t>(out[0]) << 32) | out[1];
    return (static_cast<double>(bits >> 11) + 0.5) * 0x1.0p-53;
}

}  // namespace bpsi
