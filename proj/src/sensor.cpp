#include "scaforge/sensor.hpp"

#include <algorithm>

#include "scaforge/error.hpp"

namespace scaforge::detect {

std::string to_string(Scenario s) {
    switch (s) {
    case Scenario::Benign:
        return "benign";
    case Scenario::ClockGlitch:
        return "clock_glitch";
    case Scenario::VoltageGlitch:
        return "voltage_glitch";
    case Scenario::EmProbe:
        return "em_probe";
    }
    return "unknown";
}

Scenario scenario_from_string(const std::string& name) {
    if (name == "benign")
        return Scenario::Benign;
    if (name == "clock_glitch")
        return Scenario::ClockGlitch;
    if (name == "voltage_glitch")
        return Scenario::VoltageGlitch;
    if (name == "em_probe")
        return Scenario::EmProbe;
    throw Error("unknown sensor scenario: " + name);
}

SensorTrace simulate_sensor(Scenario scenario, std::size_t n_samples, const RngStream& rng,
                            const SensorParams& params) {
    if (n_samples < 32)
        throw DimensionError("simulate_sensor: n_samples must be >= 32");

    SensorTrace trace;
    trace.label = scenario;
    trace.sample_rate = params.sample_rate;
    trace.samples.resize(n_samples);

    RngStream r = rng; // noise + event placement share one stream
    std::vector<double> wave(n_samples);
    for (std::size_t s = 0; s < n_samples; ++s)
        wave[s] = params.baseline +
                  (params.sigma == 0.0 ? 0.0 : params.sigma * r.next_gaussian());

    switch (scenario) {
    case Scenario::Benign:
        break;
    case Scenario::ClockGlitch: {
        const std::size_t width = std::max<std::size_t>(1, params.pulse_width);
        const std::size_t offset = r.next_below(n_samples - width);
        for (std::size_t s = offset; s < offset + width; ++s)
            wave[s] += params.pulse_amp;
        break;
    }
    case Scenario::VoltageGlitch: {
        const std::size_t width =
            std::max<std::size_t>(2, params.sag_width / 2 + r.next_below(params.sag_width));
        const std::size_t clamped = std::min(width, n_samples - 1);
        const std::size_t offset = r.next_below(n_samples - clamped);
        const double depth = params.sag_depth * (0.5 + 0.5 * r.next_unit());
        for (std::size_t s = offset; s < offset + clamped; ++s)
            wave[s] -= depth;
        break;
    }
    case Scenario::EmProbe: {
        // Probe approach: coupling envelope ramps up over the trace.
        for (std::size_t s = 0; s < n_samples; ++s) {
            const double ramp =
                1.0 + params.coupling * static_cast<double>(s) / static_cast<double>(n_samples - 1);
            wave[s] *= ramp;
        }
        break;
    }
    }

    for (std::size_t s = 0; s < n_samples; ++s)
        trace.samples[s] = static_cast<float>(wave[s]);
    return trace;
}

SensorDataset make_sensor_dataset(std::size_t n_traces, std::size_t n_samples,
                                  const RngStream& rng, const SensorParams& params) {
    SensorDataset ds;
    ds.n_samples = n_samples;
    ds.sample_rate = params.sample_rate;
    ds.traces.reserve(n_traces);
    for (std::size_t i = 0; i < n_traces; ++i) {
        const auto scenario = static_cast<Scenario>(i % kNumClasses);
        ds.traces.push_back(simulate_sensor(scenario, n_samples, rng.substream(i), params));
    }
    return ds;
}

} // namespace scaforge::detect
