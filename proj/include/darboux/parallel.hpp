#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace darboux {

// Worker count from DARBOUX_THREADS (unset or 0 = hardware concurrency).
std::size_t thread_count();

// Calls body(i) for i in [0, n). Work is split into contiguous blocks; if any
// call throws, the exception from the lowest block is rethrown.
template <typename Body>
void parallel_for(std::size_t n, Body&& body)
{
    const std::size_t workers = std::min(thread_count(), n / 64 + 1);
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i)
            body(i);
        return;
    }
    std::vector<std::exception_ptr> errors(workers);
    {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (std::size_t w = 0; w < workers; ++w) {
            pool.emplace_back([&, w] {
                const std::size_t begin = n * w / workers;
                const std::size_t end = n * (w + 1) / workers;
                try {
                    for (std::size_t i = begin; i < end; ++i)
                        body(i);
                } catch (...) {
                    errors[w] = std::current_exception();
                }
            });
        }
    }
    for (const auto& e : errors)
        if (e)
            std::rethrow_exception(e);
}

} // namespace darboux
