#pragma once

#include <cstdint>

#include "scaforge/rng.hpp"
#include "scaforge/trace_set.hpp"

namespace scaforge::cm {

/// Digital signature attenuation: a slice-quantized current source with a
/// hysteretic switched-mode control loop.
struct DsacConfig {
    double attenuation = 100.0; // residual divider A >= 1
    double i_unit = 1.0;        // current per CS slice
    double v_low = -1.0;        // SMC integrator lower threshold
    double v_high = 1.0;        // SMC integrator upper threshold
    double cap = 8.0;           // integrator capacitance-like constant
    std::uint32_t max_slices = 4096;

    void validate() const;
};

/// RO-bleed randomization: per-window random bleed level plus small jitter.
struct BleedConfig {
    double max_strength = 0.0;
    std::uint32_t window = 16;

    void validate() const;
};

/// Time-varying transfer function: windowed sample permutation with bounded
/// multiplicative gain jitter.
struct TvtfConfig {
    std::uint32_t window = 8;
    double gain_spread = 0.0; // g in [0, 1)

    void validate() const;
};

/// Supply operating point; attenuation holds only with the current source in
/// saturation (vdd >= v_sat) and collapses linearly towards v_lin.
struct SupplyConfig {
    double vdd = 1.2;
    double v_sat = 1.0;
    double v_lin = 0.7;
    double v_fail = 0.5;

    void validate() const;
};

/// Effective residual divider at the given operating point: A in saturation,
/// 1 at or below v_lin, linear in between. Computed even below v_fail.
double effective_attenuation(const DsacConfig& dsac, const SupplyConfig& supply);

/// Runs the SMC loop over every trace; the observable supply current is
/// n_slices(t) * i_unit + demand(t) / A_eff. Metadata is preserved.
/// Throws SupplyFailure if supply.vdd < supply.v_fail.
TraceSet apply_dsac(const TraceSet& traces, const DsacConfig& dsac, const SupplyConfig& supply);

/// Adds the randomized bleed current: one level per window drawn in
/// [0, s_w] with s_w ~ U(0, max_strength), plus per-sample jitter in
/// [0, 0.1 * s_w].
TraceSet apply_ro_bleed(const TraceSet& traces, const BleedConfig& cfg, const RngStream& rng);

/// Permutes samples within each window (fresh keyed permutation per trace
/// and window) and scales each by an independent factor in [1-g, 1+g].
TraceSet apply_tvtf(const TraceSet& traces, const TvtfConfig& cfg, const RngStream& rng);

} // namespace scaforge::cm
