#include "scaforge/countermeasure.hpp"

#include <algorithm>
#include <cmath>

#include "scaforge/parallel.hpp"

namespace scaforge::cm {

namespace {
constexpr std::uint64_t kBleedStream = 0x626c656564ULL; // "bleed"
constexpr std::uint64_t kTvtfStream = 0x74767466ULL;    // "tvtf"
} // namespace

void DsacConfig::validate() const {
    if (attenuation < 1.0)
        throw ConfigError("attenuation", "must be >= 1");
    if (i_unit <= 0.0)
        throw ConfigError("i_unit", "must be > 0");
    if (!(v_low < v_high))
        throw ConfigError("v_low", "must be < v_high");
    if (cap <= 0.0)
        throw ConfigError("cap", "must be > 0");
    if (max_slices < 1)
        throw ConfigError("max_slices", "must be >= 1");
}

void BleedConfig::validate() const {
    if (max_strength < 0.0)
        throw ConfigError("max_strength", "must be >= 0");
    if (window < 1)
        throw ConfigError("window", "must be >= 1");
}

void TvtfConfig::validate() const {
    // window 1 is the degenerate identity; meaningful obfuscation needs >= 2.
    if (window < 1)
        throw ConfigError("window", "must be >= 1");
    if (gain_spread < 0.0 || gain_spread >= 1.0)
        throw ConfigError("gain_spread", "must be in [0, 1)");
}

void SupplyConfig::validate() const {
    if (!(v_fail < v_lin && v_lin < v_sat))
        throw ConfigError("v_fail", "need v_fail < v_lin < v_sat");
}

double effective_attenuation(const DsacConfig& dsac, const SupplyConfig& supply) {
    dsac.validate();
    supply.validate();
    if (supply.vdd >= supply.v_sat)
        return dsac.attenuation;
    if (supply.vdd <= supply.v_lin)
        return 1.0;
    const double frac = (supply.vdd - supply.v_lin) / (supply.v_sat - supply.v_lin);
    return 1.0 + frac * (dsac.attenuation - 1.0);
}

TraceSet apply_dsac(const TraceSet& traces, const DsacConfig& dsac, const SupplyConfig& supply) {
    dsac.validate();
    supply.validate();
    if (supply.vdd < supply.v_fail)
        throw SupplyFailure("apply_dsac: vdd below v_fail, AES core cannot operate");

    const double a_eff = effective_attenuation(dsac, supply);
    TraceSet out = traces;

    parallel_chunks(traces.n_traces, 64, [&](std::size_t lo, std::size_t hi) {
        for (std::size_t t = lo; t < hi; ++t) {
            const float* in = traces.trace(t);
            float* dst = out.trace(t);
            // The loop runs continuously on silicon, so each encryption sees
            // it in an unsynchronized state; model that as an integrator
            // phase derived from the trace's own plaintext.
            std::uint64_t fold = 0;
            for (std::uint8_t b : traces.plaintexts[t])
                fold = fold * 131 + b;
            const double phase = RngStream::to_unit(RngStream::at(fold, 0xd5ac, 0));
            double v = dsac.v_low + phase * (dsac.v_high - dsac.v_low);
            // Start from the idle demand level. The trace minimum estimates
            // it without reading any leak spike (those only add current).
            double idle = in[0];
            for (std::size_t s = 1; s < traces.n_samples; ++s)
                idle = std::min(idle, static_cast<double>(in[s]));
            long n_slices = std::clamp<long>(
                static_cast<long>(std::lround(idle / dsac.i_unit)), 0,
                static_cast<long>(dsac.max_slices));
            for (std::size_t s = 0; s < traces.n_samples; ++s) {
                const double demand = in[s];
                v += (static_cast<double>(n_slices) * dsac.i_unit - demand) / dsac.cap;
                // Anti-windup: the integrator saturates at the thresholds, so
                // each excursion moves the slice count by one, not by a ramp.
                if (v > dsac.v_high) {
                    n_slices = std::max<long>(n_slices - 1, 0);
                    v = dsac.v_high;
                } else if (v < dsac.v_low) {
                    n_slices = std::min<long>(n_slices + 1, static_cast<long>(dsac.max_slices));
                    v = dsac.v_low;
                }
                dst[s] = static_cast<float>(static_cast<double>(n_slices) * dsac.i_unit +
                                            demand / a_eff);
            }
        }
    });
    return out;
}

TraceSet apply_ro_bleed(const TraceSet& traces, const BleedConfig& cfg, const RngStream& rng) {
    cfg.validate();
    if (cfg.max_strength == 0.0)
        return traces;

    TraceSet out = traces;
    const std::size_t n_windows = (traces.n_samples + cfg.window - 1) / cfg.window;

    parallel_chunks(traces.n_traces, 64, [&](std::size_t lo, std::size_t hi) {
        for (std::size_t t = lo; t < hi; ++t) {
            RngStream r = rng.substream(kBleedStream).substream(t);
            float* dst = out.trace(t);
            for (std::size_t w = 0; w < n_windows; ++w) {
                const double strength = cfg.max_strength * r.next_unit(); // s_w
                const double level = strength * r.next_unit();
                const std::size_t end = std::min<std::size_t>((w + 1) * cfg.window,
                                                              traces.n_samples);
                for (std::size_t s = w * cfg.window; s < end; ++s) {
                    const double jitter = 0.1 * strength * r.next_unit();
                    dst[s] = static_cast<float>(dst[s] + level + jitter);
                }
            }
        }
    });
    return out;
}

TraceSet apply_tvtf(const TraceSet& traces, const TvtfConfig& cfg, const RngStream& rng) {
    cfg.validate();
    if (traces.n_samples < cfg.window)
        throw DimensionError("apply_tvtf: n_samples smaller than window");

    TraceSet out = traces;
    std::size_t n_windows = traces.n_samples / cfg.window; // trailing partial window untouched

    parallel_chunks(traces.n_traces, 64, [&](std::size_t lo, std::size_t hi) {
        std::vector<std::uint32_t> perm(cfg.window);
        for (std::size_t t = lo; t < hi; ++t) {
            RngStream r = rng.substream(kTvtfStream).substream(t);
            const float* in = traces.trace(t);
            float* dst = out.trace(t);
            for (std::size_t w = 0; w < n_windows; ++w) {
                const std::size_t base = w * cfg.window;
                for (std::uint32_t i = 0; i < cfg.window; ++i)
                    perm[i] = i;
                for (std::uint32_t i = cfg.window - 1; i > 0; --i)
                    std::swap(perm[i], perm[r.next_below(i + 1)]);
                for (std::uint32_t i = 0; i < cfg.window; ++i) {
                    const double gain =
                        1.0 + cfg.gain_spread * (2.0 * r.next_unit() - 1.0);
                    dst[base + i] = static_cast<float>(in[base + perm[i]] * gain);
                }
            }
        }
    });
    return out;
}

} // namespace scaforge::cm
