#pragma once

#include <cmath>
#include <cstdint>
#include <limits>

namespace rskld {

/// SplitMix64 finalizer. Used to expand seeds and to derive substreams.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Counter-based seed derivation: the seed of substream (a, b) under `root`
/// depends only on the triple, so any partition of work across threads
/// reproduces the same draws.
constexpr std::uint64_t derive_seed(std::uint64_t root, std::uint64_t a,
                                    std::uint64_t b = 0) noexcept {
    return splitmix64(root ^ splitmix64(a * 0xd1b54a32d192ed03ULL ^ splitmix64(b + 0x632be59bd9b4e019ULL)));
}

/// xoshiro256++ (Blackman & Vigna). Satisfies UniformRandomBitGenerator.
class Xoshiro256pp {
public:
    using result_type = std::uint64_t;

    explicit Xoshiro256pp(std::uint64_t seed = 0) noexcept { reseed(seed); }

    void reseed(std::uint64_t seed) noexcept {
        std::uint64_t x = seed;
        for (auto& w : s_) {
            w = splitmix64(x);
            x += 0x9e3779b97f4a7c15ULL;
        }
    }

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept {
        return std::numeric_limits<result_type>::max();
    }

    result_type operator()() noexcept {
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

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform() noexcept { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

private:
    static constexpr std::uint64_t rotl(std::uint64_t x, int k) noexcept {
        return (x << k) | (x >> (64 - k));
    }
    std::uint64_t s_[4]{};
};

/// Standard normal variates by the Marsaglia polar method. The algorithm is
/// fixed so that streams are reproducible across releases.
class NormalSampler {
public:
    template <class Engine>
    double operator()(Engine& eng) noexcept {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u, v, s;
        do {
            u = 2.0 * to_unit(eng()) - 1.0;
            v = 2.0 * to_unit(eng()) - 1.0;
            s = u * u + v * v;
        } while (s >= 1.0 || s == 0.0);
        const double f = std::sqrt(-2.0 * std::log(s) / s);
        spare_ = v * f;
        has_spare_ = true;
        return u * f;
    }

    void reset() noexcept { has_spare_ = false; }

private:
    static double to_unit(std::uint64_t r) noexcept {
        return static_cast<double>(r >> 11) * 0x1.0p-53;
    }
    double spare_ = 0.0;
    bool has_spare_ = false;
};

/// Engine plus cached-normal state; the usual per-task random source.
struct RandomSource {
    explicit RandomSource(std::uint64_t seed) : engine(seed) {}
    double normal() noexcept { return gauss(engine); }
    double uniform() noexcept { return engine.uniform(); }

    Xoshiro256pp engine;
    NormalSampler gauss;
};

}  // namespace rskld
