#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>
#include <string_view>

namespace klgof {

// Finalization mix of splitmix64; bijective on 64-bit words.
inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ull;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

// Counter-based stream id: FNV-1a over a purpose tag and integer parts.
// Stream ids derived this way are stable across platforms and independent
// of the order in which parallel work is scheduled.
inline std::uint64_t stream_id(std::string_view tag,
                               std::initializer_list<std::uint64_t> parts) {
    std::uint64_t h = 0xCBF29CE484222325ull;
    auto eat = [&h](std::uint64_t v) {
        for (int i = 0; i < 8; ++i) {
            h ^= (v >> (8 * i)) & 0xFFull;
            h *= 0x100000001B3ull;
        }
    };
    for (char c : tag) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001B3ull;
    }
    for (std::uint64_t v : parts) eat(v);
    return h;
}

// Reproducible random stream keyed by (master_seed, stream_id). Identical
// keys yield identical draws on every platform: the engine is the fully
// specified mt19937_64 and all distributions below are implemented by hand
// (the <random> distribution classes are implementation-defined).
//
// Each stream is meant for a single consumer; parallel work partitions by
// stream id, never by sharing one stream.
class SeededRng {
public:
    SeededRng(std::uint64_t master_seed, std::uint64_t stream)
        : master_seed_(master_seed),
          stream_(stream),
          engine_(mix64(mix64(master_seed) ^ (stream + 0x9E3779B97F4A7C15ull))) {}

    std::uint64_t master_seed() const { return master_seed_; }
    std::uint64_t stream() const { return stream_; }

    std::uint64_t next_u64() { return engine_(); }

    // Uniform on [0, 1), 53-bit resolution.
    double uniform01() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    // Uniform on (0, 1].
    double uniform01_open_below() { return 1.0 - uniform01(); }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    // Standard normal via Box-Muller; the second deviate is cached.
    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        const double u1 = uniform01_open_below();
        const double u2 = uniform01();
        const double radius = std::sqrt(-2.0 * std::log(u1));
        const double angle = 2.0 * 3.14159265358979323846 * u2;
        spare_ = radius * std::sin(angle);
        has_spare_ = true;
        return radius * std::cos(angle);
    }

    // Gamma(shape, scale) by Marsaglia-Tsang, boosted for shape < 1.
    double gamma(double shape, double scale);

    double chi_square(double dof) { return gamma(0.5 * dof, 2.0); }

private:
    std::uint64_t master_seed_ = 0;
    std::uint64_t stream_ = 0;
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace klgof
