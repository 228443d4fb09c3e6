#include "superfid/rng.hpp"

#include <cmath>

namespace superfid {

namespace {

std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

std::mt19937_64 keyed_engine(std::uint64_t seed, std::uint64_t stream) {
    // Mix seed and stream through splitmix64 before expanding with seed_seq so
    // that neighbouring keys do not share low-entropy seed words.
    std::uint64_t state = seed ^ (0xD1B54A32D192ED03ULL * (stream + 1));
    std::uint32_t words[8];
    for (int i = 0; i < 8; i += 2) {
        const std::uint64_t z = splitmix64(state);
        words[i] = static_cast<std::uint32_t>(z);
        words[i + 1] = static_cast<std::uint32_t>(z >> 32);
    }
    std::seed_seq seq(std::begin(words), std::end(words));
    return std::mt19937_64(seq);
}

}  // namespace

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream)
    : seed_(seed), stream_(stream), engine_(keyed_engine(seed, stream)) {}

double RngStream::uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double RngStream::normal() { return normal_(engine_); }

std::complex<double> RngStream::complex_normal() {
    static const double scale = std::sqrt(0.5);
    const double re = normal_(engine_);
    const double im = normal_(engine_);
    return {scale * re, scale * im};
}

}  // namespace superfid
