#include "numeric.hpp"

#include <atomic>

namespace totmom {

namespace {
std::atomic<unsigned> g_workers{1};
}

unsigned worker_threads() noexcept { return g_workers.load(std::memory_order_relaxed); }

void set_worker_threads(unsigned n) noexcept { g_workers.store(n == 0 ? 1 : n, std::memory_order_relaxed); }

}  // namespace totmom
