#include "scaforge/cpa.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "scaforge/aes.hpp"
#include "scaforge/parallel.hpp"

namespace scaforge {

namespace {

// Both first-round models reduce to a function of pt ^ guess.
struct HypTables {
    std::array<int, 256> hw;
    std::array<int, 256> hd;
    HypTables() {
        for (int x = 0; x < 256; ++x) {
            const std::uint8_t out = sbox_lookup(static_cast<std::uint8_t>(x));
            hw[x] = hamming_weight(out);
            hd[x] = hamming_weight(static_cast<std::uint8_t>(out ^ x));
        }
    }
};

const HypTables& hyp_tables() {
    static const HypTables tables;
    return tables;
}

} // namespace

int hypothesis_value(LeakModel model, std::uint8_t pt_byte, std::uint8_t key_guess) {
    const auto& t = hyp_tables();
    const std::uint8_t x = static_cast<std::uint8_t>(pt_byte ^ key_guess);
    return model == LeakModel::HammingWeight ? t.hw[x] : t.hd[x];
}

std::size_t ByteResult::rank_of(std::uint8_t key_byte) const {
    for (std::size_t r = 0; r < kNumHypotheses; ++r)
        if (ranking[r] == key_byte)
            return r + 1;
    return kNumHypotheses; // unreachable for a complete ranking
}

std::vector<std::uint8_t> CpaResult::best_key() const {
    std::vector<std::uint8_t> key(kAttackedBytes);
    for (std::size_t b = 0; b < kAttackedBytes; ++b)
        key[b] = bytes[b].ranking[0];
    return key;
}

CpaAccumulator::CpaAccumulator(std::size_t n_samples, LeakModel model)
    : n_samples_(n_samples), model_(model) {
    if (n_samples == 0)
        throw DimensionError("CpaAccumulator: n_samples must be positive");
    sum_x_.assign(n_samples, 0.0);
    sum_xx_.assign(n_samples, 0.0);
    sum_h_.assign(kAttackedBytes * kNumHypotheses, 0.0);
    sum_hh_.assign(kAttackedBytes * kNumHypotheses, 0.0);
    sum_hx_.assign(kAttackedBytes * kNumHypotheses * n_samples, 0.0);
}

void CpaAccumulator::update(const TraceSet& batch) {
    if (batch.n_traces == 0)
        return;
    if (batch.n_samples != n_samples_)
        throw DimensionError("CpaAccumulator::update: sample count mismatch");
    if (batch.plaintexts.size() != batch.n_traces)
        throw DimensionError("CpaAccumulator::update: missing plaintexts");

    for (std::size_t t = 0; t < batch.n_traces; ++t) {
        const float* row = batch.trace(t);
        for (std::size_t s = 0; s < n_samples_; ++s) {
            const double x = row[s];
            sum_x_[s] += x;
            sum_xx_[s] += x * x;
        }
    }

    const auto& tables = hyp_tables();
    const auto& table = model_ == LeakModel::HammingWeight ? tables.hw : tables.hd;

    // One task per attacked byte: every (byte, hyp, sample) cell is written
    // by exactly one task, in trace order, so results do not depend on the
    // worker count.
    parallel_chunks(kAttackedBytes, 1, [&](std::size_t lo, std::size_t hi) {
        for (std::size_t b = lo; b < hi; ++b) {
            for (std::size_t t = 0; t < batch.n_traces; ++t) {
                const float* row = batch.trace(t);
                const std::uint8_t pt = batch.plaintexts[t][b];
                for (std::size_t k = 0; k < kNumHypotheses; ++k) {
                    const double h = table[pt ^ k];
                    sum_h_[b * kNumHypotheses + k] += h;
                    sum_hh_[b * kNumHypotheses + k] += h * h;
                    double* dst = &hx(b, k, 0);
                    for (std::size_t s = 0; s < n_samples_; ++s)
                        dst[s] += h * row[s];
                }
            }
        }
    });
    n_ += batch.n_traces;
}

void CpaAccumulator::merge(const CpaAccumulator& other) {
    if (other.n_samples_ != n_samples_ || other.model_ != model_)
        throw DimensionError("CpaAccumulator::merge: incompatible states");
    n_ += other.n_;
    for (std::size_t i = 0; i < sum_x_.size(); ++i) {
        sum_x_[i] += other.sum_x_[i];
        sum_xx_[i] += other.sum_xx_[i];
    }
    for (std::size_t i = 0; i < sum_h_.size(); ++i) {
        sum_h_[i] += other.sum_h_[i];
        sum_hh_[i] += other.sum_hh_[i];
    }
    for (std::size_t i = 0; i < sum_hx_.size(); ++i)
        sum_hx_[i] += other.sum_hx_[i];
}

double CpaAccumulator::correlation(std::size_t byte_idx, std::size_t hyp,
                                   std::size_t sample) const {
    const double n = static_cast<double>(n_);
    const double sh = sum_h_[byte_idx * kNumHypotheses + hyp];
    const double shh = sum_hh_[byte_idx * kNumHypotheses + hyp];
    const double sx = sum_x_[sample];
    const double sxx = sum_xx_[sample];
    const double var_h = n * shh - sh * sh;
    const double var_x = n * sxx - sx * sx;
    if (var_h <= 0.0 || var_x <= 0.0)
        return 0.0; // zero-variance convention
    const double cov = n * hx(byte_idx, hyp, sample) - sh * sx;
    const double rho = cov / std::sqrt(var_h * var_x);
    return std::clamp(rho, -1.0, 1.0);
}

CpaResult CpaAccumulator::result() const {
    if (n_ < 2)
        throw DimensionError("CpaAccumulator::result: need at least 2 traces");
    CpaResult res;
    parallel_chunks(kAttackedBytes, 1, [&](std::size_t lo, std::size_t hi) {
        for (std::size_t b = lo; b < hi; ++b) {
            ByteResult& br = res.bytes[b];
            for (std::size_t k = 0; k < kNumHypotheses; ++k) {
                double best = -1.0;
                std::uint32_t best_s = 0;
                for (std::size_t s = 0; s < n_samples_; ++s) {
                    const double a = std::fabs(correlation(b, k, s));
                    if (a > best) {
                        best = a;
                        best_s = static_cast<std::uint32_t>(s);
                    }
                }
                br.correlation[k] = best;
                br.best_sample[k] = best_s;
            }
            std::array<std::uint16_t, kNumHypotheses> order;
            std::iota(order.begin(), order.end(), 0);
            std::stable_sort(order.begin(), order.end(), [&](std::uint16_t a, std::uint16_t c) {
                if (br.correlation[a] != br.correlation[c])
                    return br.correlation[a] > br.correlation[c];
                return a < c;
            });
            for (std::size_t r = 0; r < kNumHypotheses; ++r)
                br.ranking[r] = static_cast<std::uint8_t>(order[r]);
        }
    });
    return res;
}

CpaResult cpa_attack(const TraceSet& traces, LeakModel model) {
    if (traces.n_traces < 2)
        throw DimensionError("cpa_attack: need at least 2 traces");
    CpaAccumulator acc(traces.n_samples, model);
    acc.update(traces);

    // Degenerate input: every sample column constant.
    bool any_varying = false;
    for (std::size_t s = 0; s < traces.n_samples && !any_varying; ++s) {
        const float first = traces.at(0, s);
        for (std::size_t t = 1; t < traces.n_traces; ++t)
            if (traces.at(t, s) != first) {
                any_varying = true;
                break;
            }
    }
    if (!any_varying)
        throw DegenerateTraces("cpa_attack: all samples constant");

    return acc.result();
}

} // namespace scaforge
