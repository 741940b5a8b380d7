#include "edclust/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <mutex>
#include <stdexcept>
#include <thread>
#include <vector>

namespace edclust {

namespace {

std::atomic<int> g_max_threads{0};
thread_local bool t_inside_parallel = false;

int resolved_thread_count() {
  const int configured = g_max_threads.load(std::memory_order_relaxed);
  if (configured > 0) return configured;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

}  // namespace

void set_max_threads(int n) {
  if (n < 0) throw std::invalid_argument("set_max_threads: n must be >= 0");
  g_max_threads.store(n, std::memory_order_relaxed);
}

int max_threads() { return resolved_thread_count(); }

void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn) {
  if (count == 0) return;
  const int threads = resolved_thread_count();
  if (threads <= 1 || count == 1 || t_inside_parallel) {
    t_inside_parallel = true;
    try {
      for (std::size_t i = 0; i < count; ++i) fn(i);
    } catch (...) {
      t_inside_parallel = false;
      throw;
    }
    t_inside_parallel = false;
    return;
  }

  std::atomic<std::size_t> cursor{0};
  std::atomic<bool> failed{false};
  std::exception_ptr first_error;
  std::mutex error_mutex;

  auto worker = [&]() {
    t_inside_parallel = true;
    while (!failed.load(std::memory_order_relaxed)) {
      const std::size_t i = cursor.fetch_add(1, std::memory_order_relaxed);
      if (i >= count) break;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
        failed.store(true, std::memory_order_relaxed);
      }
    }
    t_inside_parallel = false;
  };

  const std::size_t spawn = std::min<std::size_t>(static_cast<std::size_t>(threads) - 1, count - 1);
  std::vector<std::thread> pool;
  pool.reserve(spawn);
  for (std::size_t t = 0; t < spawn; ++t) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace edclust
