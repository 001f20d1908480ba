#pragma once

#include <cstdint>
#include <random>

// Deterministic randomness. Every consumer derives its stream from one master
// seed via stream_seed(master, stream, index); quadrature draws use one keyed
// uniform per record (keyed by record index, not by thread), so results do not
// depend on how work is partitioned.

namespace qse {

enum class Stream : std::uint32_t {
    Jitter = 1,
    CoincidenceTimes = 2,
    Spcm1Times = 3,
    Spcm2Times = 4,
    Drift = 5,
    QuadPrimary = 6,
    QuadSpcm1 = 7,
    QuadSpcm2 = 8,
};

std::uint64_t stream_seed(std::uint64_t master, Stream stream, std::uint64_t index);

/// One uniform in [0,1) keyed by (master, stream, index).
double keyed_u01(std::uint64_t master, Stream stream, std::uint64_t index);

struct Rng {
    explicit Rng(std::uint64_t seed) : eng(seed) {}

    double u01() { return static_cast<double>(eng() >> 11) * 0x1.0p-53; }

    // Inverse-CDF exponential; never evaluates log(0).
    double exponential(double rate) { return -std::log1p(-u01()) / rate; }

    // Box-Muller, two uniforms per draw.
    double normal() {
        const double u1 = u01();
        const double u2 = u01();
        return std::sqrt(-2.0 * std::log1p(-u1)) * std::cos(6.283185307179586477 * u2);
    }

    std::mt19937_64 eng;
};

}  // namespace qse
