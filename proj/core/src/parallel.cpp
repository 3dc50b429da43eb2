#include "salem/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>

namespace salem {

unsigned thread_count() {
  if (const char* env = std::getenv("SALEM_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v > 0) return static_cast<unsigned>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

void for_each_chunk(std::size_t n,
                    const std::function<void(std::size_t, std::size_t, std::size_t)>& body) {
  const std::size_t chunks = chunk_count(n);
  if (chunks == 0) return;
  const unsigned workers = static_cast<unsigned>(std::min<std::size_t>(thread_count(), chunks));
  auto run = [&](std::size_t c) {
    const std::size_t b = c * kChunkSize;
    body(b, std::min(n, b + kChunkSize), c);
  };
  if (workers <= 1) {
    for (std::size_t c = 0; c < chunks; ++c) run(c);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t c = next++; c < chunks; c = next++) {
        try {
          run(c);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!first_error) first_error = std::current_exception();
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace salem
