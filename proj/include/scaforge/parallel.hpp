#pragma once

#include <cstddef>
#include <functional>

namespace scaforge {

/// Worker cap from SCAFORGE_THREADS (0 or unset = hardware concurrency).
std::size_t thread_budget();

/// Programmatic override; 0 restores env/auto behaviour. Returns old value.
std::size_t set_thread_override(std::size_t n);

/// Runs fn(begin, end) over [0, n) split into fixed-size chunks.
///
/// Chunk boundaries depend only on n, never on the worker count, so any
/// chunk-local state is identical across thread budgets. Caller guarantees
/// chunks touch disjoint data.
void parallel_chunks(std::size_t n, std::size_t chunk,
                     const std::function<void(std::size_t, std::size_t)>& fn);

} // namespace scaforge
