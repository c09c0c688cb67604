#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <vector>

#include "scaforge/cpa.hpp"

namespace scaforge {

/// Produces traces [first, first+count) of a deterministic sequence.
using TraceSource = std::function<TraceSet(std::size_t first, std::size_t count)>;

struct RankPoint {
    std::size_t checkpoint = 0; // traces consumed
    std::size_t rank = 0;       // worst byte rank of the true key (1 = disclosed)
    double best_corr = 0.0;     // strongest |rho| the true key achieves
};

struct MtdReport {
    std::optional<std::size_t> mtd; // nullopt = not disclosed
    std::vector<RankPoint> rank_curve;
    std::size_t stability_window = 3;

    bool disclosed() const { return mtd.has_value(); }
};

/// Geometric checkpoint schedule (factor 1.5 from 100 by default), clipped
/// to max_traces and always ending exactly at max_traces.
std::vector<std::size_t> default_checkpoints(std::size_t max_traces, std::size_t start = 100,
                                             double factor = 1.5);

struct MtdConfig {
    LeakModel model = LeakModel::HammingWeight;
    std::vector<std::uint8_t> true_key; // first 16 bytes are attacked
    std::vector<std::size_t> checkpoints;
    std::size_t stability_window = 3;
    // Stop consuming traces once a full rank-1 streak is confirmed. The MTD
    // value is unaffected (the first completed streak is the earliest one);
    // only the tail of the rank curve is omitted.
    bool stop_at_disclosure = false;
};

/// Streams traces through the CPA engine, ranking the true key at every
/// checkpoint. MTD is the earliest checkpoint where the full key is rank 1
/// there and at the next stability_window-1 checkpoints.
MtdReport compute_mtd(const TraceSource& source, const MtdConfig& cfg);

} // namespace scaforge
