#pragma once

#include <cstddef>
#include <functional>

namespace bvq {

// Worker count used by every parallel loop in the library. Results never
// depend on it.
void set_thread_count(int n);
int thread_count() noexcept;

// Calls body(chunk) for chunk in [0, chunks), spread over the worker pool.
// Callers own per-chunk output slots and combine them in chunk order.
void parallel_chunks(std::size_t chunks, const std::function<void(std::size_t)>& body);

// Fixed chunking of [0, n): the partition depends only on n.
struct ChunkPlan {
    std::size_t n;
    std::size_t size;
    std::size_t count() const noexcept { return size == 0 ? 0 : (n + size - 1) / size; }
    std::size_t begin(std::size_t c) const noexcept { return c * size; }
    std::size_t end(std::size_t c) const noexcept { return c * size + size < n ? c * size + size : n; }
};

ChunkPlan make_chunk_plan(std::size_t n, std::size_t target_chunks = 64);

}  // namespace bvq
