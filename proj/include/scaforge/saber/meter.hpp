#pragma once

#include <algorithm>
#include <cstdint>

namespace scaforge::saber {

/// Instrumentation for the multiplier pipeline. Live-word accounting covers
/// the working state that lazy interpolation shrinks: materialized product
/// evaluations, evaluated-domain accumulators and interpolated intermediate
/// polynomials. Operand evaluations are streamed inputs and tracked only as
/// a volume counter.
class MemoryMeter {
  public:
    void alloc(std::uint64_t words) {
        current_ += words;
        peak_ = std::max(peak_, current_);
    }
    void release(std::uint64_t words) { current_ -= words; }

    void count_interpolation() { ++interpolations_; }
    void count_pointwise(std::uint64_t n) { pointwise_ += n; }
    void count_mults(std::uint64_t n) { mults_ += n; }
    void count_eval_words(std::uint64_t n) { eval_words_ += n; }

    std::uint64_t current_words() const { return current_; }
    std::uint64_t peak_words() const { return peak_; }
    std::uint64_t interpolations() const { return interpolations_; }
    std::uint64_t pointwise_products() const { return pointwise_; }
    std::uint64_t coefficient_mults() const { return mults_; }
    std::uint64_t operand_eval_words() const { return eval_words_; }

    /// Combine a sub-task meter: counters add, peaks take the max.
    void merge(const MemoryMeter& other) {
        peak_ = std::max(peak_, other.peak_);
        current_ += other.current_;
        interpolations_ += other.interpolations_;
        pointwise_ += other.pointwise_;
        mults_ += other.mults_;
        eval_words_ += other.eval_words_;
    }

    void reset() { *this = MemoryMeter(); }

  private:
    std::uint64_t current_ = 0;
    std::uint64_t peak_ = 0;
    std::uint64_t interpolations_ = 0;
    std::uint64_t pointwise_ = 0;
    std::uint64_t mults_ = 0;
    std::uint64_t eval_words_ = 0;
};

} // namespace scaforge::saber
