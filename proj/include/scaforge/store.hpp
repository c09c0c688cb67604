#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "scaforge/countermeasure.hpp"
#include "scaforge/leakage.hpp"
#include "scaforge/mlp.hpp"
#include "scaforge/mtd.hpp"
#include "scaforge/ro_tracker.hpp"
#include "scaforge/sensor.hpp"
#include "scaforge/trace_set.hpp"
#include "scaforge/vdd_attack.hpp"

namespace scaforge::store {

// Trace container: "SCAT" magic, version 1, f32 little-endian samples.
// Layout: 20-byte header, then per trace [16B plaintext][16B ciphertext if
// flag bit0][n_samples x 4B samples]. Everything the header cannot carry
// (leak positions, true key, labels) lives in sidecar files next to it.
inline constexpr std::uint32_t kTraceFormatVersion = 1;

struct TraceMeta {
    std::array<std::uint32_t, 16> leak_positions{};
    std::vector<std::uint8_t> key; // empty = unknown
    std::optional<LeakModel> model;
    double sample_rate = 0.0; // sensor datasets only
};

std::filesystem::path meta_path(const std::filesystem::path& trace_path);
std::filesystem::path labels_path(const std::filesystem::path& trace_path);

/// Writes the binary trace file plus its .meta.json sidecar atomically
/// (.partial then rename).
void write_traces(const std::filesystem::path& path, const TraceSet& ts, const TraceMeta& meta);

TraceMeta parse_trace_meta(const std::string& json_text);

/// Reads file + sidecar back; bit-exact inverse of write_traces.
TraceSet read_traces(const std::filesystem::path& path, TraceMeta* meta = nullptr);

/// Labeled sensor dataset: trace container (flags bit1, zero plaintexts)
/// plus a labels CSV sidecar.
void write_sensor_dataset(const std::filesystem::path& path, const detect::SensorDataset& ds);
detect::SensorDataset read_sensor_dataset(const std::filesystem::path& path);

/// Detector model file: versioned JSON with layer dims and row-major
/// weight arrays.
void write_detector_model(const std::filesystem::path& path, const detect::DetectorModel& m);
detect::DetectorModel read_detector_model(const std::filesystem::path& path);

/// Whole-workbench configuration, strict-parsed (unknown fields rejected,
/// ranges validated).
struct ExperimentConfig {
    LeakageConfig leakage;
    cm::DsacConfig dsac;
    cm::BleedConfig bleed;
    cm::TvtfConfig tvtf;
    cm::SupplyConfig supply;

    struct Attack {
        LeakModel model = LeakModel::HammingWeight;
        std::size_t budget = 20000;
        std::size_t checkpoint_start = 100;
        double checkpoint_factor = 1.5;
        std::size_t stability_window = 3;
    } attack;

    struct Detector {
        detect::SensorParams sensor;
        std::size_t n_samples = 128;
        std::vector<std::size_t> hidden = {64, 32};
        double learning_rate = 0.05;
        std::size_t epochs = 30;
        std::size_t batch_size = 32;
    } detector;

    detect::RoTrackerConfig ro_tracker;

    std::size_t sim_samples = 200; // trace length for `simulate`

    void validate() const;
};

ExperimentConfig load_config(const std::filesystem::path& path);
void save_config(const std::filesystem::path& path, const ExperimentConfig& cfg);

/// CSV reports (documented headers, dot decimal separator, 6 significant
/// digits for floating-point).
void emit_mtd_report(const std::filesystem::path& path, const MtdReport& report);
void emit_cpa_report(const std::filesystem::path& path, const CpaResult& result,
                     const std::vector<std::uint8_t>& true_key);
void emit_training_report(const std::filesystem::path& path,
                          const std::vector<detect::EpochStat>& curve);
void emit_vdd_sweep_report(const std::filesystem::path& path,
                           const std::vector<cm::VddSweepPoint>& sweep);

/// Locale-independent shortest/6-digit float formatting used by the CSVs.
std::string format_double(double v);

/// Writes content to path via a .partial temp file and rename.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

} // namespace scaforge::store
