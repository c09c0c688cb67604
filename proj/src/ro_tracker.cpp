#include "scaforge/ro_tracker.hpp"

#include <cmath>

#include "scaforge/error.hpp"

namespace scaforge::detect {

void RoTrackerConfig::validate() const {
    if (k_ro <= 0.0)
        throw ConfigError("k_ro", "must be > 0");
    if (epoch < 1)
        throw ConfigError("epoch", "must be >= 1");
    if (tau < 1)
        throw ConfigError("tau", "must be >= 1");
    if (divider <= 0.0)
        throw ConfigError("divider", "must be > 0");
}

std::optional<std::size_t> voltage_drop_detect(const std::vector<double>& vdd_series,
                                               const std::vector<double>& aes_node_series,
                                               const RoTrackerConfig& cfg) {
    cfg.validate();
    if (vdd_series.size() != aes_node_series.size())
        throw DimensionError("voltage_drop_detect: series lengths differ");

    const std::size_t n_epochs = vdd_series.size() / cfg.epoch;
    std::uint32_t streak = 0;
    for (std::size_t e = 0; e < n_epochs; ++e) {
        const std::size_t base = e * cfg.epoch;
        double vdd_sum = 0.0, aes_sum = 0.0;
        for (std::size_t s = 0; s < cfg.epoch; ++s) {
            vdd_sum += vdd_series[base + s];
            aes_sum += aes_node_series[base + s];
        }
        // Ideal RO cycle counts over the epoch; the epsilon keeps matched
        // trackers matched when the product lands on an exact integer.
        const auto ref_count = static_cast<long long>(
            std::floor(cfg.k_ro * cfg.divider * vdd_sum + 1e-9));
        const auto aes_count = static_cast<long long>(
            std::floor(cfg.k_ro * aes_sum + 1e-9));
        if (ref_count != aes_count) {
            if (++streak >= cfg.tau)
                return base; // first sample of the tau-th mismatching epoch
        } else {
            streak = 0;
        }
    }
    return std::nullopt;
}

DropFixture make_drop_fixture(std::size_t n_samples, std::size_t drop_sample, double vdd_nominal,
                              double drop_frac, double divider) {
    DropFixture fx;
    fx.drop_sample = drop_sample;
    fx.vdd.assign(n_samples, vdd_nominal);
    for (std::size_t s = drop_sample; s < n_samples; ++s)
        fx.vdd[s] = vdd_nominal * (1.0 - drop_frac);
    // SMC regulation keeps the AES node at its nominal point.
    fx.v_aes.assign(n_samples, vdd_nominal * divider);
    return fx;
}

} // namespace scaforge::detect
