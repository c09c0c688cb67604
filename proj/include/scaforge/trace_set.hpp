#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "scaforge/error.hpp"

namespace scaforge {

using Block16 = std::array<std::uint8_t, 16>;

/// A batch of simulated power traces plus the per-trace crypto metadata.
///
/// samples is row-major n_traces x n_samples, 32-bit floats (the on-disk
/// dtype). leak_positions holds the sample index where each of the 16 state
/// bytes leaks.
struct TraceSet {
    std::size_t n_traces = 0;
    std::size_t n_samples = 0;
    std::vector<float> samples;
    std::vector<Block16> plaintexts;
    std::vector<Block16> ciphertexts; // empty or n_traces entries
    std::array<std::uint32_t, 16> leak_positions{};

    float* trace(std::size_t t) { return samples.data() + t * n_samples; }
    const float* trace(std::size_t t) const { return samples.data() + t * n_samples; }

    float& at(std::size_t t, std::size_t s) { return samples[t * n_samples + s]; }
    float at(std::size_t t, std::size_t s) const { return samples[t * n_samples + s]; }

    bool has_ciphertexts() const { return !ciphertexts.empty(); }

    /// Checks the type invariants; throws DimensionError on violation.
    void validate() const;

    /// Appends all traces of `other` (shapes and leak positions must agree).
    void append(const TraceSet& other);
};

} // namespace scaforge
