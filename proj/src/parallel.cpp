#include "scaforge/parallel.hpp"

#include <atomic>
#include <cstdlib>
#include <thread>
#include <vector>

namespace scaforge {

namespace {
std::atomic<std::size_t> g_override{0};
}

std::size_t set_thread_override(std::size_t n) {
    return g_override.exchange(n);
}

std::size_t thread_budget() {
    if (std::size_t n = g_override.load(); n != 0)
        return n;
    if (const char* env = std::getenv("SCAFORGE_THREADS")) {
        char* end = nullptr;
        unsigned long v = std::strtoul(env, &end, 10);
        if (end != env && v > 0)
            return static_cast<std::size_t>(v);
    }
    unsigned hc = std::thread::hardware_concurrency();
    return hc ? hc : 1;
}

void parallel_chunks(std::size_t n, std::size_t chunk,
                     const std::function<void(std::size_t, std::size_t)>& fn) {
    if (n == 0)
        return;
    if (chunk == 0)
        chunk = 1;
    const std::size_t n_chunks = (n + chunk - 1) / chunk;
    const std::size_t workers = std::min(thread_budget(), n_chunks);

    if (workers <= 1) {
        for (std::size_t c = 0; c < n_chunks; ++c)
            fn(c * chunk, std::min(n, (c + 1) * chunk));
        return;
    }

    std::atomic<std::size_t> next{0};
    auto body = [&] {
        for (;;) {
            const std::size_t c = next.fetch_add(1);
            if (c >= n_chunks)
                return;
            fn(c * chunk, std::min(n, (c + 1) * chunk));
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(workers - 1);
    for (std::size_t w = 1; w < workers; ++w)
        pool.emplace_back(body);
    body();
    for (auto& t : pool)
        t.join();
}

} // namespace scaforge
