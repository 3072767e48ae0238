#include "bvq/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <stdexcept>
#include <thread>
#include <vector>

namespace bvq {

namespace {
std::atomic<int> g_threads{0};

int default_threads() {
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}
}  // namespace

void set_thread_count(int n) {
    if (n < 0) throw std::invalid_argument("thread count must be >= 0");
    g_threads.store(n);
}

int thread_count() noexcept {
    const int n = g_threads.load();
    return n == 0 ? default_threads() : n;
}

ChunkPlan make_chunk_plan(std::size_t n, std::size_t target_chunks) {
    if (n == 0) return {0, 0};
    target_chunks = std::max<std::size_t>(1, target_chunks);
    return {n, std::max<std::size_t>(1, (n + target_chunks - 1) / target_chunks)};
}

void parallel_chunks(std::size_t chunks, const std::function<void(std::size_t)>& body) {
    const std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(thread_count()), chunks);
    if (workers <= 1) {
        for (std::size_t c = 0; c < chunks; ++c) body(c);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto run = [&] {
        for (;;) {
            const std::size_t c = next.fetch_add(1);
            if (c >= chunks) return;
            try {
                body(c);
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (!error) error = std::current_exception();
                next.store(chunks);
                return;
            }
        }
    };
    std::vector<std::jthread> pool;
    pool.reserve(workers - 1);
    for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(run);
    run();
    pool.clear();
    if (error) std::rethrow_exception(error);
}

}  // namespace bvq
