#pragma once

#include <cstddef>

namespace collapselab {

// Worker cap: COLLAPSE_LAB_THREADS if set to a positive integer, otherwise
// the hardware concurrency (at least 1).
std::size_t worker_count();

}  // namespace collapselab
