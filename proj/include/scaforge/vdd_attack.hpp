#pragma once

#include <optional>
#include <vector>

#include "scaforge/countermeasure.hpp"
#include "scaforge/mtd.hpp"

namespace scaforge::cm {

struct VddAttackConfig {
    LeakageConfig leakage;
    DsacConfig dsac;
    SupplyConfig supply; // nominal operating point and the v_* anchors
    double range_lo = 0.0;
    double range_hi = 0.0;
    double step = 0.0;
    std::size_t budget = 20000; // CPA trace budget per sweep point
    std::size_t n_samples = 24;
    std::uint64_t seed = 1;
    LeakModel model = LeakModel::HammingWeight;
    std::size_t stability_window = 3;
};

struct VddSweepPoint {
    double vdd = 0.0;
    double a_eff = 0.0;
    std::optional<std::size_t> mtd; // nullopt = not disclosed within budget
};

struct VddAttackResult {
    double vdd_star = 0.0;
    std::size_t mtd_star = 0;
    std::optional<std::size_t> mtd_nominal;
    std::vector<VddSweepPoint> sweep;
};

/// Sweeps the supply voltage over [range_lo, range_hi] and runs a
/// fixed-budget CPA at each point on identically seeded traces, returning
/// the point with the smallest MTD that strictly beats the nominal
/// operating point. Throws NoAttackFound when nothing does.
VddAttackResult find_voltage_drop_attack(const VddAttackConfig& cfg);

} // namespace scaforge::cm
