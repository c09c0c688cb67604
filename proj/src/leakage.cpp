#include "scaforge/leakage.hpp"

#include "scaforge/aes.hpp"
#include "scaforge/parallel.hpp"

namespace scaforge {

namespace {

// Sub-stream ids for the independent randomness consumers.
constexpr std::uint64_t kPlaintextStream = 0x706c61696e74ULL; // "plaint"
constexpr std::uint64_t kNoiseStream = 0x6e6f697365ULL;       // "noise"

// 16 positions spread evenly; strictly increasing for any n_samples >= 16.
std::array<std::uint32_t, 16> spread_leak_positions(std::size_t n_samples) {
    std::array<std::uint32_t, 16> pos{};
    for (std::size_t b = 0; b < 16; ++b)
        pos[b] = static_cast<std::uint32_t>((2 * b + 1) * n_samples / 32);
    return pos;
}

} // namespace

void LeakageConfig::validate() const {
    if (sigma < 0)
        throw ConfigError("sigma", "must be >= 0");
    if (alpha < 0)
        throw ConfigError("alpha", "must be >= 0");
    const std::size_t want = aes_variant == AesVariant::Aes128 ? 16 : 32;
    if (key.size() != want)
        throw ConfigError("key", "length does not match aes_variant");
}

double leakage_value(const LeakageConfig& cfg, std::uint8_t pt_byte, std::uint8_t key_byte,
                     std::uint8_t prev_state_byte) {
    const std::uint8_t out = sbox_lookup(static_cast<std::uint8_t>(pt_byte ^ key_byte));
    const int bits = cfg.model == LeakModel::HammingWeight
                         ? hamming_weight(out)
                         : hamming_weight(static_cast<std::uint8_t>(out ^ prev_state_byte));
    return cfg.alpha * bits + cfg.baseline;
}

TraceSet simulate_demand_range(const LeakageConfig& cfg, std::size_t first, std::size_t count,
                               std::size_t n_samples, const RngStream& rng) {
    cfg.validate();
    if (n_samples < 16)
        throw DimensionError("simulate_demand_traces: n_samples must be >= 16");
    if (count == 0)
        throw DimensionError("simulate_demand_traces: need at least one trace");

    TraceSet ts;
    ts.n_traces = count;
    ts.n_samples = n_samples;
    ts.samples.resize(count * n_samples);
    ts.plaintexts.resize(count);
    ts.leak_positions = spread_leak_positions(n_samples);

    parallel_chunks(count, 64, [&](std::size_t lo, std::size_t hi) {
        std::vector<double> noise(n_samples);
        for (std::size_t i = lo; i < hi; ++i) {
            const std::size_t trace_idx = first + i;
            RngStream pt_rng = rng.substream(kPlaintextStream).substream(trace_idx);
            RngStream noise_rng = rng.substream(kNoiseStream).substream(trace_idx);

            Block16& pt = ts.plaintexts[i];
            for (auto& b : pt)
                b = static_cast<std::uint8_t>(pt_rng.next_u64() & 0xff);

            float* row = ts.trace(i);
            for (std::size_t s = 0; s < n_samples; ++s) {
                noise[s] = cfg.sigma == 0.0 ? 0.0 : cfg.sigma * noise_rng.next_gaussian();
                row[s] = static_cast<float>(cfg.baseline + noise[s]);
            }
            // One double->float rounding per leak sample, so sigma=0 stores
            // leakage_value exactly.
            for (std::size_t b = 0; b < 16; ++b) {
                const std::uint8_t kb = cfg.key[b];
                const std::uint8_t prev = static_cast<std::uint8_t>(pt[b] ^ kb);
                const std::uint32_t pos = ts.leak_positions[b];
                row[pos] = static_cast<float>(leakage_value(cfg, pt[b], kb, prev) + noise[pos]);
            }
        }
    });
    return ts;
}

TraceSet simulate_demand_traces(const LeakageConfig& cfg, std::size_t n_traces,
                                std::size_t n_samples, const RngStream& rng) {
    return simulate_demand_range(cfg, 0, n_traces, n_samples, rng);
}

} // namespace scaforge
