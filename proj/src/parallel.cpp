#include "hwe_equiv/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace hwe_equiv {

std::size_t worker_count()
{
    std::size_t workers = std::max(1u, std::thread::hardware_concurrency());
    if (const char* cap = std::getenv("HWE_EQUIV_THREADS"); cap != nullptr && *cap != '\0') {
        try {
            const long parsed = std::stol(cap);
            if (parsed >= 1) {
                workers = std::min(workers, static_cast<std::size_t>(parsed));
            }
        } catch (const std::exception&) {
            // Unparsable cap: keep the hardware default.
        }
    }
    return workers;
}

void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body)
{
    const std::size_t workers = std::min(worker_count(), count);
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) {
            body(i);
        }
        return;
    }

    std::atomic<std::size_t> next{0};
    std::mutex error_mutex;
    std::size_t error_index = count;
    std::exception_ptr error;

    auto work = [&] {
        for (std::size_t i = next++; i < count; i = next++) {
            try {
                body(i);
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (i < error_index) {
                    error_index = i;
                    error = std::current_exception();
                }
            }
        }
    };
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back(work);
    }
    pool.clear();
    if (error) {
        std::rethrow_exception(error);
    }
}

} // namespace hwe_equiv
