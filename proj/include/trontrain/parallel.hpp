// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <functional>

namespace tt {

// Worker cap: TRONTRAIN_THREADS if set to a positive integer, else the
// hardware concurrency (at least 1).
std::size_t worker_count();

// Calls fn(i) for i in [0, n) across up to worker_count() threads. Each
// index runs exactly once; callers write results into slot i so the
// aggregate is independent of scheduling. The first exception thrown by
// any task is rethrown after all workers join.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace tt
