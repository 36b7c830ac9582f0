#pragma once

#include <cstddef>
#include <functional>

namespace randzeros {

// 0 means "use hardware_concurrency".
unsigned resolve_workers(unsigned requested);

// Runs fn(chunk) for every chunk in [0, n_chunks) on up to `workers` threads.
// Chunks are claimed from a shared atomic counter; callers must write each
// chunk's output to storage indexed by chunk id so the combined result is
// independent of scheduling.
void parallel_chunks(std::size_t n_chunks, unsigned workers,
                     const std::function<void(std::size_t)>& fn);

} // namespace randzeros
