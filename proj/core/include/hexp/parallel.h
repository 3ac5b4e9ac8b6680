#ifndef HEXP_PARALLEL_H_
#define HEXP_PARALLEL_H_

#include <cstddef>
#include <functional>

namespace hexp {

// Caps the number of worker threads used by parallel_for. 0 restores the
// default (hardware concurrency).
void set_thread_count(unsigned threads);
unsigned thread_count();

// Runs body(i) for every i in [0, n). Iterations are split into contiguous
// chunks, one per worker. Callers write results into per-index slots, so the
// outcome never depends on the partitioning.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace hexp

#endif  // HEXP_PARALLEL_H_
