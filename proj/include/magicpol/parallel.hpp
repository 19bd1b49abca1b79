#pragma once

#include <cstddef>
#include <functional>

namespace magicpol {

/// Worker count used when a call does not ask for one; 0 means
/// std::thread::hardware_concurrency().
void set_default_threads(unsigned n);
unsigned default_threads();

/// Runs body(i) for i in [0, n) on `threads` workers (0: default). Work is
/// split into fixed contiguous chunks, so callers that write only to slot i
/// get results independent of the thread count. The first exception thrown
/// by any body is rethrown.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body, unsigned threads = 0);

}  // namespace magicpol
