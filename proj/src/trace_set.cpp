#include "scaforge/trace_set.hpp"

#include <cmath>

namespace scaforge {

void TraceSet::validate() const {
    if (samples.size() != n_traces * n_samples)
        throw DimensionError("TraceSet: samples size does not match n_traces x n_samples");
    if (plaintexts.size() != n_traces)
        throw DimensionError("TraceSet: plaintext count does not match n_traces");
    if (!ciphertexts.empty() && ciphertexts.size() != n_traces)
        throw DimensionError("TraceSet: ciphertext count does not match n_traces");
    for (std::size_t i = 0; i < leak_positions.size(); ++i) {
        if (leak_positions[i] >= n_samples)
            throw DimensionError("TraceSet: leak position beyond n_samples");
        if (i > 0 && leak_positions[i] <= leak_positions[i - 1])
            throw DimensionError("TraceSet: leak positions not strictly increasing");
    }
    for (float v : samples)
        if (!std::isfinite(v))
            throw DimensionError("TraceSet: non-finite sample");
}

void TraceSet::append(const TraceSet& other) {
    if (n_traces == 0 && n_samples == 0) {
        *this = other;
        return;
    }
    if (other.n_samples != n_samples)
        throw DimensionError("TraceSet::append: n_samples mismatch");
    if (other.leak_positions != leak_positions)
        throw DimensionError("TraceSet::append: leak position mismatch");
    if (other.has_ciphertexts() != has_ciphertexts())
        throw DimensionError("TraceSet::append: ciphertext presence mismatch");
    samples.insert(samples.end(), other.samples.begin(), other.samples.end());
    plaintexts.insert(plaintexts.end(), other.plaintexts.begin(), other.plaintexts.end());
    ciphertexts.insert(ciphertexts.end(), other.ciphertexts.begin(), other.ciphertexts.end());
    n_traces += other.n_traces;
}

} // namespace scaforge
