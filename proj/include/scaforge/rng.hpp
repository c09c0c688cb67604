#pragma once

#include <cstdint>

namespace scaforge {

/// Counter-based deterministic random stream.
///
/// Every output is a pure function of (seed, stream_id, counter), so any
/// consumer can be given its own stream_id and produce identical values no
/// matter how work is chunked or scheduled. Streams with distinct stream_id
/// are statistically independent.
class RngStream {
  public:
    RngStream(std::uint64_t seed, std::uint64_t stream_id)
        : seed_(seed), stream_id_(stream_id), counter_(0) {}

    std::uint64_t seed() const { return seed_; }
    std::uint64_t stream_id() const { return stream_id_; }
    std::uint64_t counter() const { return counter_; }

    /// Stateless access: value at an explicit counter position.
    static std::uint64_t at(std::uint64_t seed, std::uint64_t stream_id, std::uint64_t counter);

    std::uint64_t next_u64() { return at(seed_, stream_id_, counter_++); }

    /// Uniform in [0,1), 53-bit resolution.
    double next_unit() { return to_unit(next_u64()); }

    /// Uniform integer in [0, bound). bound must be nonzero.
    std::uint64_t next_below(std::uint64_t bound) { return next_u64() % bound; }

    /// Standard normal via Box-Muller on two consecutive counter values.
    double next_gaussian();

    /// Derive an independent stream for a sub-task (e.g. one per trace).
    RngStream substream(std::uint64_t id) const;

    static double to_unit(std::uint64_t x) {
        return static_cast<double>(x >> 11) * 0x1.0p-53;
    }

  private:
    std::uint64_t seed_;
    std::uint64_t stream_id_;
    std::uint64_t counter_;
};

} // namespace scaforge
