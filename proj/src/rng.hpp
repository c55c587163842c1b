#pragma once

#include <cstdint>

namespace gldp {

// Counter-based stream RNG.  Every (vertex, edge, ...) site of a random model
// gets its own stream keyed by a tag and indices, so couplings can share coins
// by construction and generation order never matters.
inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

inline std::uint64_t stream_key(std::uint64_t master, char tag, std::uint64_t a = 0,
                                std::uint64_t b = 0) {
    std::uint64_t h = mix64(master ^ 0x6C62272E07BB0142ULL);
    h = mix64(h ^ static_cast<std::uint64_t>(static_cast<unsigned char>(tag)));
    h = mix64(h ^ a);
    h = mix64(h ^ b);
    return h;
}

class StreamRng {
public:
    explicit StreamRng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        state_ += 0x9E3779B97F4A7C15ULL;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    // Uniform in [0, 1).
    double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Uniform integer in [0, n).
    std::uint64_t next_below(std::uint64_t n) { return next_u64() % n; }

private:
    std::uint64_t state_;
};

// Seed derivation rules for the sampling module (see SeedSpec).
struct SeedSpec {
    std::uint64_t master = 0;

    StreamRng vertex_stream(std::uint64_t i) const { return StreamRng(stream_key(master, 'v', i)); }
    // Edge streams are keyed by the unordered pair {i, j}, i < j.
    StreamRng edge_stream(std::uint64_t i, std::uint64_t j) const {
        if (i > j) std::swap(i, j);
        return StreamRng(stream_key(master, 'e', i, j));
    }
    StreamRng tagged_stream(char tag, std::uint64_t a = 0, std::uint64_t b = 0) const {
        return StreamRng(stream_key(master, tag, a, b));
    }
};

} // namespace gldp
