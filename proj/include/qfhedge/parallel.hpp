#pragma once

#include <cstddef>
#include <exception>
#include <span>
#include <thread>
#include <vector>

namespace qfhedge {

/// Runs body(first, last) over disjoint chunks of [0, count), one chunk per
/// worker. Results must be written to disjoint, preallocated slots so the
/// outcome is independent of scheduling. Exceptions are rethrown on the caller.
template <typename Body>
void parallel_chunks(std::size_t count, const Body& body) {
    unsigned workers = std::thread::hardware_concurrency();
    if (workers == 0) workers = 1;
    if (count < 2 * workers) {
        body(std::size_t{0}, count);
        return;
    }

    const std::size_t chunk = (count + workers - 1) / workers;
    std::vector<std::thread> threads;
    std::vector<std::exception_ptr> errors(workers);
    threads.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
        const std::size_t first = w * chunk;
        const std::size_t last = std::min(count, first + chunk);
        if (first >= last) break;
        threads.emplace_back([&, w, first, last] {
            try {
                body(first, last);
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    }
    for (auto& t : threads) t.join();
    for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
}

/// Compensated (Kahan) sum in index order: deterministic for a fixed input
/// regardless of how the values were produced.
inline double compensated_sum(std::span<const double> values) {
    double sum = 0.0;
    double carry = 0.0;
    for (double v : values) {
        const double y = v - carry;
        const double t = sum + y;
        carry = (t - sum) - y;
        sum = t;
    }
    return sum;
}

}  // namespace qfhedge
