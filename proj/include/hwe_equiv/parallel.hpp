#pragma once

#include <cstddef>
#include <functional>

namespace hwe_equiv {

// Worker count: hardware concurrency, capped by HWE_EQUIV_THREADS when set.
std::size_t worker_count();

// Runs body(i) for every i in [0, count) across worker_count() threads.
// Callers write results into slot i of a pre-sized container so the outcome
// does not depend on scheduling. The exception from the lowest failing index
// is rethrown after all workers finish.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

} // namespace hwe_equiv
