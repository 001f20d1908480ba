#include "qse/rng.hpp"

namespace qse {

namespace {

// splitmix64 finalizer (Steele, Lea, Flood 2014).
std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

}  // namespace

std::uint64_t stream_seed(std::uint64_t master, Stream stream, std::uint64_t index) {
    std::uint64_t z = master + 0x9E3779B97F4A7C15ull * (static_cast<std::uint64_t>(stream) + 1);
    z = mix64(z);
    z += 0x9E3779B97F4A7C15ull * (index + 1);
    return mix64(z);
}

double keyed_u01(std::uint64_t master, Stream stream, std::uint64_t index) {
    return static_cast<double>(stream_seed(master, stream, index) >> 11) * 0x1.0p-53;
}

}  // namespace qse
