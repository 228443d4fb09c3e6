#pragma once

#include <complex>
#include <cstdint>
#include <random>

namespace superfid {

/// Reproducible random stream keyed by (master seed, stream index).
///
/// Two streams with the same key produce identical sequences; distinct stream
/// indices under one seed are used for independent shards of a batch.
class RngStream {
public:
    RngStream(std::uint64_t seed, std::uint64_t stream);

    std::uint64_t seed() const noexcept { return seed_; }
    std::uint64_t stream() const noexcept { return stream_; }

    /// Uniform on [0, 1) with 53 random bits.
    double uniform();
    double normal();
    /// Complex normal with independent real/imaginary parts of variance 1/2.
    std::complex<double> complex_normal();

    std::mt19937_64& engine() noexcept { return engine_; }

private:
    std::uint64_t seed_;
    std::uint64_t stream_;
    std::mt19937_64 engine_;
    std::normal_distribution<double> normal_;
};

}  // namespace superfid
