#ifndef QLOC_RNG_HPP_
#define QLOC_RNG_HPP_

#include <cstdint>

namespace qloc {

inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// xoshiro256++ with substreams derived from (seed, stream_index) via splitmix64.
// Per-stream sequences depend only on the pair, never on scheduling, so parallel
// consumers stay reproducible for any worker count.
class Xoshiro256 {
  public:
    Xoshiro256(std::uint64_t seed, std::uint64_t stream_index) {
        std::uint64_t sm = seed ^ (0x6a09e667f3bcc909ULL + stream_index * 0x1d8e4e27c47d124fULL);
        for (auto& w : s_) w = splitmix64(sm);
    }

    std::uint64_t next() {
        const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    // uniform in [0, 1)
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    // uniform in {0, .., n-1}; n > 0
    std::uint64_t uniform_below(std::uint64_t n) {
        // multiply-shift; bias below 2^-64 * n is irrelevant at our sample counts
        return static_cast<std::uint64_t>((static_cast<unsigned __int128>(next()) * n) >> 64);
    }

  private:
    static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
    std::uint64_t s_[4];
};

}  // namespace qloc

#endif
