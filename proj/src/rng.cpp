#include "scaforge/rng.hpp"

#include <cmath>
#include <numbers>

namespace scaforge {

namespace {

// SplitMix64 finalizer; full-avalanche mix of one word.
inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

} // namespace

std::uint64_t RngStream::at(std::uint64_t seed, std::uint64_t stream_id, std::uint64_t counter) {
    std::uint64_t h = mix64(seed);
    h = mix64(h ^ stream_id);
    return mix64(h ^ counter);
}

double RngStream::next_gaussian() {
    // u1 shifted into (0,1) so log() is always finite.
    const double u1 = (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
    const double u2 = next_unit();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

RngStream RngStream::substream(std::uint64_t id) const {
    return RngStream(seed_, mix64(stream_id_ ^ mix64(id)));
}

} // namespace scaforge
