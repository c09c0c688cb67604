#include "scaforge/mtd.hpp"

#include <algorithm>
#include <cmath>
#include <memory>

namespace scaforge {

std::vector<std::size_t> default_checkpoints(std::size_t max_traces, std::size_t start,
                                             double factor) {
    std::vector<std::size_t> cps;
    double c = static_cast<double>(std::min(start, max_traces));
    for (;;) {
        const auto v = static_cast<std::size_t>(c);
        if (v >= max_traces)
            break;
        if (cps.empty() || v > cps.back())
            cps.push_back(v);
        c *= factor;
    }
    cps.push_back(max_traces);
    return cps;
}

MtdReport compute_mtd(const TraceSource& source, const MtdConfig& cfg) {
    if (cfg.checkpoints.empty())
        throw DimensionError("compute_mtd: empty checkpoint list");
    for (std::size_t i = 1; i < cfg.checkpoints.size(); ++i)
        if (cfg.checkpoints[i] <= cfg.checkpoints[i - 1])
            throw DimensionError("compute_mtd: checkpoints must be increasing");
    if (cfg.stability_window < 1)
        throw DimensionError("compute_mtd: stability_window must be >= 1");
    if (cfg.true_key.size() < kAttackedBytes)
        throw DimensionError("compute_mtd: true key must cover the attacked bytes");

    MtdReport report;
    report.stability_window = cfg.stability_window;

    std::unique_ptr<CpaAccumulator> acc;
    std::size_t consumed = 0;
    std::size_t streak = 0;
    for (std::size_t cp : cfg.checkpoints) {
        const std::size_t want = cp - consumed;
        TraceSet batch = source(consumed, want);
        if (batch.n_traces != want)
            throw DimensionError("compute_mtd: source returned wrong batch size");
        if (!acc)
            acc = std::make_unique<CpaAccumulator>(batch.n_samples, cfg.model);
        acc->update(batch);
        consumed = cp;

        const CpaResult res = acc->result();
        RankPoint pt;
        pt.checkpoint = cp;
        pt.rank = 1;
        pt.best_corr = 0.0;
        for (std::size_t b = 0; b < kAttackedBytes; ++b) {
            const std::uint8_t kb = cfg.true_key[b];
            pt.rank = std::max(pt.rank, res.bytes[b].rank_of(kb));
            pt.best_corr = std::max(pt.best_corr, res.bytes[b].correlation[kb]);
        }
        report.rank_curve.push_back(pt);

        streak = pt.rank == 1 ? streak + 1 : 0;
        if (cfg.stop_at_disclosure && streak >= cfg.stability_window)
            break;
    }

    // Earliest checkpoint opening a full rank-1 streak of stability_window.
    const auto& curve = report.rank_curve;
    for (std::size_t i = 0; i + cfg.stability_window <= curve.size(); ++i) {
        bool stable = true;
        for (std::size_t j = 0; j < cfg.stability_window; ++j)
            if (curve[i + j].rank != 1) {
                stable = false;
                break;
            }
        if (stable) {
            report.mtd = curve[i].checkpoint;
            break;
        }
    }
    return report;
}

} // namespace scaforge
