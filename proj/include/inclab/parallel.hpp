#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdlib>
#include <exception>
#include <thread>
#include <vector>

namespace inclab {

/// Worker count: LAB_THREADS when set to a positive integer, otherwise the
/// hardware concurrency.
inline unsigned default_threads() {
    if (const char* env = std::getenv("LAB_THREADS")) {
        const long n = std::strtol(env, nullptr, 10);
        if (n > 0) return static_cast<unsigned>(n);
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

/// Number of chunks parallel_chunks uses for n items.
inline std::size_t chunk_count(std::size_t n, unsigned threads) {
    if (threads == 0) threads = default_threads();
    return std::min<std::size_t>(threads, std::max<std::size_t>(n, 1));
}

/// Runs body(begin, end, chunk) over contiguous chunks of [0, n), one chunk
/// per worker. Chunk boundaries depend only on n and the worker count.
template <class Body>
void parallel_chunks(std::size_t n, unsigned threads, Body&& body) {
    const std::size_t workers = chunk_count(n, threads);
    if (workers <= 1) {
        body(std::size_t{0}, n, std::size_t{0});
        return;
    }
    std::vector<std::exception_ptr> errors(workers);
    {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (std::size_t w = 0; w < workers; ++w) {
            const std::size_t begin = n * w / workers;
            const std::size_t end = n * (w + 1) / workers;
            pool.emplace_back([&, w, begin, end] {
                try {
                    body(begin, end, w);
                } catch (...) {
                    errors[w] = std::current_exception();
                }
            });
        }
    }
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

}  // namespace inclab
