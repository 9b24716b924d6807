#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace rgd {

/// Runs fn(i) for every i in [0, count) on up to `threads` workers.
/// Tasks are independent; callers write results into per-index slots so the
/// outcome never depends on the worker count.
template <typename Fn>
void parallel_for(std::size_t count, unsigned threads, Fn&& fn) {
  const unsigned workers =
      static_cast<unsigned>(std::min<std::size_t>(std::max(1u, threads), count));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto body = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= count) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next.store(count);
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) pool.emplace_back(body);
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

/// Sufficient statistics of a sample mean.
struct MeanAccumulator {
  double sum = 0.0;
  double sum_sq = 0.0;
  std::uint64_t count = 0;

  void add(double x) noexcept {
    sum += x;
    sum_sq += x * x;
    ++count;
  }
  void merge(const MeanAccumulator& o) noexcept {
    sum += o.sum;
    sum_sq += o.sum_sq;
    count += o.count;
  }
  double mean() const noexcept { return count ? sum / static_cast<double>(count) : 0.0; }
  double variance() const noexcept {
    if (count < 2) return 0.0;
    const double n = static_cast<double>(count);
    const double v = (sum_sq - sum * sum / n) / (n - 1.0);
    return v > 0.0 ? v : 0.0;
  }
  double std_error() const noexcept {
    return count ? std::sqrt(variance() / static_cast<double>(count)) : 0.0;
  }
};

inline constexpr std::uint64_t kMonteCarloBlock = 1024;

/// Monte Carlo mean over `samples` draws; sample(i) must depend only on i.
/// Blocks are fixed-size and merged in index order, so the floating-point
/// result is identical for every thread count.
template <typename SampleFn>
MeanAccumulator blocked_mean(std::uint64_t samples, unsigned threads, SampleFn&& sample) {
  const std::uint64_t blocks = (samples + kMonteCarloBlock - 1) / kMonteCarloBlock;
  std::vector<MeanAccumulator> partial(blocks);
  parallel_for(blocks, threads, [&](std::size_t b) {
    const std::uint64_t lo = b * kMonteCarloBlock;
    const std::uint64_t hi = std::min(samples, lo + kMonteCarloBlock);
    MeanAccumulator acc;
    for (std::uint64_t i = lo; i < hi; ++i) acc.add(sample(i));
    partial[b] = acc;
  });
  MeanAccumulator total;
  for (const auto& p : partial) total.merge(p);
  return total;
}

}  // namespace rgd
