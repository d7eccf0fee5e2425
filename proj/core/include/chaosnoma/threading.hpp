#pragma once

#include <cstddef>
#include <functional>

namespace chaosnoma {

// Runs fn(begin, end) over a static contiguous partition of [0, count) using
// at most n_threads workers.  Every output element is owned by exactly one
// worker, so results are bit-identical for any thread count: parallelism
// never changes which operations touch which data, only who executes them.
//
// n_threads == 0 or 1, or count small, degrades to a plain serial call with
// no thread machinery involved.
void parallel_for(std::size_t count, std::size_t n_threads,
                  const std::function<void(std::size_t, std::size_t)>& fn);

// Process-wide default worker count used when a caller passes threads = 0.
// Defaults to 1; the command line tools set it from --threads.
void set_default_threads(std::size_t n);
std::size_t default_threads();

// Resolves a requested thread count: 0 means "use the process default".
std::size_t resolve_threads(std::size_t requested);

}  // namespace chaosnoma
