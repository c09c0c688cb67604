#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "scaforge/rng.hpp"

namespace scaforge::detect {

enum class Scenario : std::uint8_t {
    Benign = 0,
    ClockGlitch = 1,
    VoltageGlitch = 2,
    EmProbe = 3,
};

constexpr std::size_t kNumClasses = 4;

std::string to_string(Scenario s);
Scenario scenario_from_string(const std::string& name);

/// One simulated on-chip sensor waveform.
struct SensorTrace {
    std::vector<float> samples;
    Scenario label = Scenario::Benign;
    double sample_rate = 1e6; // samples per second
};

/// Waveform archetypes per scenario; amplitudes are in units of the benign
/// baseline so difficulty scales with the noise level.
struct SensorParams {
    double baseline = 1.0;
    double sigma = 0.05;        // benign noise std-dev
    double pulse_amp = 1.0;     // clock glitch: narrow spike height
    std::uint32_t pulse_width = 2;
    double sag_depth = 0.4;     // voltage glitch: rectangular drop
    std::uint32_t sag_width = 24;
    double coupling = 0.5;      // em probe: envelope gain at trace end
    double sample_rate = 1e6;
};

/// Labeled dataset with a uniform trace length.
struct SensorDataset {
    std::size_t n_samples = 0;
    double sample_rate = 1e6;
    std::vector<SensorTrace> traces;
};

/// Simulates one sensor trace for a scenario; deterministic per rng stream.
SensorTrace simulate_sensor(Scenario scenario, std::size_t n_samples, const RngStream& rng,
                            const SensorParams& params);

/// Balanced dataset cycling through all four scenarios.
SensorDataset make_sensor_dataset(std::size_t n_traces, std::size_t n_samples,
                                  const RngStream& rng, const SensorParams& params);

} // namespace scaforge::detect
