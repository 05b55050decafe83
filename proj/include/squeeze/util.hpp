#pragma once

#include <charconv>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace squeeze {

/// 17 significant digits, '.' decimal separator, locale-independent.
/// Identical inputs produce byte-identical text.
inline std::string format_double(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

/// Worker cap: SQUEEZE_LAB_THREADS if set, else hardware concurrency.
inline int max_threads() {
    if (const char* env = std::getenv("SQUEEZE_LAB_THREADS")) {
        int n = std::atoi(env);
        if (n >= 1)
            return n;
    }
    unsigned hc = std::thread::hardware_concurrency();
    return hc == 0 ? 1 : static_cast<int>(hc);
}

/// Chunked parallel loop over [0, n). Each index writes its own slot, so
/// results are deterministic regardless of the worker count.
template <class Fn>
void parallel_for(std::size_t n, Fn&& fn) {
    std::size_t nt = static_cast<std::size_t>(max_threads());
    if (nt <= 1 || n < 16) {
        for (std::size_t i = 0; i < n; ++i)
            fn(i);
        return;
    }
    nt = std::min(nt, n);
    std::vector<std::thread> pool;
    pool.reserve(nt);
    std::exception_ptr first_error;
    std::mutex err_mutex;
    for (std::size_t t = 0; t < nt; ++t) {
        pool.emplace_back([&, t]() {
            std::size_t lo = n * t / nt, hi = n * (t + 1) / nt;
            try {
                for (std::size_t i = lo; i < hi; ++i)
                    fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(err_mutex);
                if (!first_error)
                    first_error = std::current_exception();
            }
        });
    }
    for (auto& th : pool)
        th.join();
    if (first_error)
        std::rethrow_exception(first_error);
}

} // namespace squeeze
