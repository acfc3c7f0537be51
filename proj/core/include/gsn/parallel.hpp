#pragma once

#include <cstddef>
#include <functional>

namespace gsn {

/// Work is cut into fixed-size chunks independent of the worker count, so any
/// per-chunk partial result reduced in chunk order is bitwise reproducible
/// whether one or many threads run.
inline constexpr std::size_t kChunkSize = 512;

inline std::size_t chunk_count(std::size_t n) { return (n + kChunkSize - 1) / kChunkSize; }

/// Calls body(chunk, begin, end) for every chunk of [0, n). threads <= 1 runs
/// inline on the caller.
void parallel_chunks(std::size_t n, std::size_t threads,
                     const std::function<void(std::size_t, std::size_t, std::size_t)>& body);

/// Resolves 0 to the hardware concurrency.
std::size_t resolve_threads(std::size_t requested);

}  // namespace gsn
