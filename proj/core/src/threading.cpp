#include "chaosnoma/threading.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace chaosnoma {

namespace {
std::atomic<std::size_t> g_default_threads{1};
}  // namespace

void set_default_threads(std::size_t n) {
  g_default_threads.store(n == 0 ? 1 : n, std::memory_order_relaxed);
}

std::size_t default_threads() {
  return g_default_threads.load(std::memory_order_relaxed);
}

std::size_t resolve_threads(std::size_t requested) {
  return requested == 0 ? default_threads() : requested;
}

void parallel_for(std::size_t count, std::size_t n_threads,
                  const std::function<void(std::size_t, std::size_t)>& fn) {
  if (count == 0) return;
  n_threads = resolve_threads(n_threads);
  const std::size_t workers = std::min(n_threads, count);
  if (workers <= 1) {
    fn(0, count);
    return;
  }
  // Static partition: worker w owns [w*chunk + min(w, rem), ...), i.e. the
  // first `rem` workers take one extra element.
  const std::size_t chunk = count / workers;
  const std::size_t rem = count % workers;
  std::exception_ptr first_error;
  std::mutex error_mutex;
  const auto guarded = [&](std::size_t begin, std::size_t end) {
    try {
      fn(begin, end);
    } catch (...) {
      const std::lock_guard<std::mutex> lock(error_mutex);
      if (!first_error) first_error = std::current_exception();
    }
  };
  std::vector<std::thread> threads;
  threads.reserve(workers - 1);
  std::size_t begin = 0;
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t len = chunk + (w < rem ? 1 : 0);
    const std::size_t end = begin + len;
    if (w + 1 == workers) {
      guarded(begin, end);  // run the last slice on the calling thread
    } else {
      threads.emplace_back([&guarded, begin, end] { guarded(begin, end); });
    }
    begin = end;
  }
  for (auto& t : threads) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace chaosnoma
