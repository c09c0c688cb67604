#pragma once

#include <cstdint>
#include <optional>
#include <vector>

namespace scaforge::detect {

/// Ring-oscillator voltage tracker pair: one counts the divided supply, the
/// other the AES-local node; a sustained count mismatch raises the alarm.
struct RoTrackerConfig {
    double k_ro = 100.0;      // counts per volt per sample
    std::uint32_t epoch = 100; // samples per comparison period
    std::uint32_t tau = 3;     // consecutive mismatching epochs to alarm
    double divider = 0.8;      // VDD division ratio to the AES node scale

    void validate() const;
};

/// Compares floor(k_ro * divider * mean(vdd) * epoch) against
/// floor(k_ro * mean(v_aes) * epoch) per epoch; returns the first sample of
/// the tau-th consecutive mismatching epoch, or nullopt.
std::optional<std::size_t> voltage_drop_detect(const std::vector<double>& vdd_series,
                                               const std::vector<double>& aes_node_series,
                                               const RoTrackerConfig& cfg);

/// Test fixture: a supply that steps down by drop_frac at drop_sample while
/// the regulated AES node holds its nominal level.
struct DropFixture {
    std::vector<double> vdd;
    std::vector<double> v_aes;
    std::size_t drop_sample = 0;
};
DropFixture make_drop_fixture(std::size_t n_samples, std::size_t drop_sample, double vdd_nominal,
                              double drop_frac, double divider);

} // namespace scaforge::detect
