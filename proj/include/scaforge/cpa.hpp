#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "scaforge/leakage.hpp"
#include "scaforge/trace_set.hpp"

namespace scaforge {

constexpr std::size_t kNumHypotheses = 256;
constexpr std::size_t kAttackedBytes = 16;

/// Attack result for one state byte: the 256 hypothesis scores
/// (max |rho| over samples), the ranking, and where the best sample was.
struct ByteResult {
    std::array<double, kNumHypotheses> correlation{};  // max |rho| per hypothesis
    std::array<std::uint32_t, kNumHypotheses> best_sample{};
    std::array<std::uint8_t, kNumHypotheses> ranking{}; // ranking[0] = best guess

    /// 1-based rank of a key byte; ties are broken by lower key value.
    std::size_t rank_of(std::uint8_t key_byte) const;
};

struct CpaResult {
    std::array<ByteResult, kAttackedBytes> bytes;

    std::vector<std::uint8_t> best_key() const;
};

/// Streaming Pearson state over (byte, hypothesis, sample) cells.
///
/// Keeps plain power sums; update order is fixed per chunk so results are
/// bit-identical no matter how batches arrive, and merge() of two states
/// equals processing the concatenated batches.
class CpaAccumulator {
  public:
    CpaAccumulator(std::size_t n_samples, LeakModel model);

    std::size_t n_samples() const { return n_samples_; }
    std::size_t n_traces() const { return n_; }
    LeakModel model() const { return model_; }

    /// Folds a batch of traces into the state.
    void update(const TraceSet& batch);

    /// Associative, commutative combine of two accumulators.
    void merge(const CpaAccumulator& other);

    /// Pearson correlation for one (byte, hypothesis, sample) cell.
    /// Zero-variance columns give 0.
    double correlation(std::size_t byte_idx, std::size_t hyp, std::size_t sample) const;

    /// Finalizes the full result (max |rho| over samples per hypothesis).
    CpaResult result() const;

  private:
    std::size_t n_samples_;
    LeakModel model_;
    std::size_t n_ = 0;
    // Per sample.
    std::vector<double> sum_x_, sum_xx_;
    // Per (byte, hypothesis).
    std::vector<double> sum_h_, sum_hh_;
    // Per (byte, hypothesis, sample), the dominant cost.
    std::vector<double> sum_hx_;

    double& hx(std::size_t b, std::size_t k, std::size_t s) {
        return sum_hx_[(b * kNumHypotheses + k) * n_samples_ + s];
    }
    const double& hx(std::size_t b, std::size_t k, std::size_t s) const {
        return sum_hx_[(b * kNumHypotheses + k) * n_samples_ + s];
    }
};

/// Hypothesised leakage for one byte under a key guess (model units, no
/// alpha/baseline: Pearson correlation is affine-invariant).
int hypothesis_value(LeakModel model, std::uint8_t pt_byte, std::uint8_t key_guess);

/// One-shot CPA over a trace set. Throws DegenerateTraces if every sample
/// column is constant.
CpaResult cpa_attack(const TraceSet& traces, LeakModel model);

} // namespace scaforge
