#pragma once

#include <cstdint>
#include <vector>

#include "scaforge/rng.hpp"
#include "scaforge/trace_set.hpp"

namespace scaforge {

enum class LeakModel : std::uint8_t { HammingWeight, HammingDistance };

enum class AesVariant : std::uint8_t { Aes128, Aes256 };

/// First-round S-box leakage of a simulated AES core.
struct LeakageConfig {
    LeakModel model = LeakModel::HammingWeight;
    double alpha = 1.0;    // power units per leaked bit
    double baseline = 0.0; // constant demand offset
    double sigma = 0.0;    // Gaussian noise std-dev on the demand
    std::vector<std::uint8_t> key; // 16 (AES-128) or 32 (AES-256) bytes
    AesVariant aes_variant = AesVariant::Aes128;

    void validate() const;
};

/// Noise-free leakage of one state byte. For the Hamming-distance model the
/// previous state is the S-box input, i.e. HD between S-box input and output
/// when prev_state = pt ^ key.
double leakage_value(const LeakageConfig& cfg, std::uint8_t pt_byte, std::uint8_t key_byte,
                     std::uint8_t prev_state_byte);

/// Simulates the unprotected current demand of the AES core: per-byte
/// first-round leakage at 16 evenly spread leak positions, Gaussian noise
/// everywhere, plaintexts drawn from rng. Bit-identical for a fixed
/// (cfg, rng) regardless of chunking or thread count.
TraceSet simulate_demand_traces(const LeakageConfig& cfg, std::size_t n_traces,
                                std::size_t n_samples, const RngStream& rng);

/// Same, but producing the half-open trace range [first, first+count) of the
/// infinite deterministic sequence defined by (cfg, rng); used for streaming
/// MTD evaluation.
TraceSet simulate_demand_range(const LeakageConfig& cfg, std::size_t first, std::size_t count,
                               std::size_t n_samples, const RngStream& rng);

} // namespace scaforge
