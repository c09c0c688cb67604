#include <charconv>

#include "scaforge/store.hpp"

namespace scaforge::store {

std::string format_double(double v) {
    char buf[48];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 6);
    return std::string(buf, res.ptr);
}

void emit_mtd_report(const std::filesystem::path& path, const MtdReport& report) {
    std::string csv = "checkpoint,rank,best_corr\n";
    for (const auto& pt : report.rank_curve)
        csv += std::to_string(pt.checkpoint) + "," + std::to_string(pt.rank) + "," +
               format_double(pt.best_corr) + "\n";
    write_file_atomic(path, csv);
}

void emit_cpa_report(const std::filesystem::path& path, const CpaResult& result,
                     const std::vector<std::uint8_t>& true_key) {
    const bool have_key = true_key.size() >= kAttackedBytes;
    std::string csv = have_key ? "byte,best_guess,best_corr,best_sample,true_byte,true_rank\n"
                               : "byte,best_guess,best_corr,best_sample\n";
    for (std::size_t b = 0; b < kAttackedBytes; ++b) {
        const auto& br = result.bytes[b];
        const std::uint8_t guess = br.ranking[0];
        csv += std::to_string(b) + "," + std::to_string(guess) + "," +
               format_double(br.correlation[guess]) + "," + std::to_string(br.best_sample[guess]);
        if (have_key) {
            csv += "," + std::to_string(true_key[b]) + "," +
                   std::to_string(br.rank_of(true_key[b]));
        }
        csv += "\n";
    }
    write_file_atomic(path, csv);
}

void emit_training_report(const std::filesystem::path& path,
                          const std::vector<detect::EpochStat>& curve) {
    std::string csv = "epoch,loss,accuracy\n";
    for (const auto& e : curve)
        csv += std::to_string(e.epoch) + "," + format_double(e.loss) + "," +
               format_double(e.accuracy) + "\n";
    write_file_atomic(path, csv);
}

void emit_vdd_sweep_report(const std::filesystem::path& path,
                           const std::vector<cm::VddSweepPoint>& sweep) {
    std::string csv = "vdd,a_eff,mtd\n";
    for (const auto& pt : sweep) {
        csv += format_double(pt.vdd) + "," + format_double(pt.a_eff) + ",";
        csv += pt.mtd ? std::to_string(*pt.mtd) : std::string("not_disclosed");
        csv += "\n";
    }
    write_file_atomic(path, csv);
}

} // namespace scaforge::store
