#pragma once

#include <cstddef>
#include <cmath>
#include <functional>
#include <vector>

namespace salem {

/// Worker count: SALEM_THREADS if set and positive, else hardware concurrency.
unsigned thread_count();

/// Fixed-size chunking makes reductions independent of the worker count.
inline constexpr std::size_t kChunkSize = std::size_t{1} << 15;

/// Calls body(begin, end, chunk_index) for each chunk of [0, n) on a pool
/// of worker threads. Chunk boundaries depend only on n.
void for_each_chunk(std::size_t n,
                    const std::function<void(std::size_t, std::size_t, std::size_t)>& body);

inline std::size_t chunk_count(std::size_t n) { return (n + kChunkSize - 1) / kChunkSize; }

/// Map over chunks, then combine partials in chunk order.
template <class T, class ChunkFn, class Combine>
T chunked_reduce(std::size_t n, T init, ChunkFn chunk_fn, Combine combine) {
  std::vector<T> partial(chunk_count(n), init);
  for_each_chunk(n, [&](std::size_t b, std::size_t e, std::size_t c) { partial[c] = chunk_fn(b, e); });
  T acc = init;
  for (auto& p : partial) acc = combine(acc, p);
  return acc;
}

/// Neumaier-compensated sum.
class CompensatedSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  void add(const CompensatedSum& other) {
    add(other.sum_);
    add(other.comp_);
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

}  // namespace salem
