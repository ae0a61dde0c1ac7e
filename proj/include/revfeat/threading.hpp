#pragma once

#include <cstddef>
#include <functional>

namespace revfeat {

/// Worker cap: REVFEAT_THREADS when set (minimum 1), otherwise the hardware
/// concurrency.
std::size_t worker_count();

/// Run fn(i) for i in [0, n), split across at most worker_count() threads.
/// Results must not depend on the split; callers get that for free when each
/// index writes to disjoint state.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace revfeat
