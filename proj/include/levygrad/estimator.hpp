#pragma once

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <exception>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <thread>
#include <vector>

namespace levygrad {

struct EstimatorResult {
  double mean = 0.0;
  double std_error = 0.0;
  std::size_t n_samples = 0;
  std::size_t n_rejected = 0;
  bool valid = true;
  std::map<std::string, double> diagnostics;
};

/// Welford accumulator; merge() is Chan's pairwise update.
struct RunningStat {
  std::size_t count = 0;
  double mean = 0.0;
  double m2 = 0.0;

  void add(double value) {
    ++count;
    const double delta = value - mean;
    mean += delta / static_cast<double>(count);
    m2 += delta * (value - mean);
  }

  void merge(const RunningStat& other) {
    if (other.count == 0) return;
    if (count == 0) {
      *this = other;
      return;
    }
    const double n = static_cast<double>(count);
    const double m = static_cast<double>(other.count);
    const double delta = other.mean - mean;
    mean += delta * m / (n + m);
    m2 += other.m2 + delta * delta * n * m / (n + m);
    count += other.count;
  }

  double variance() const { return count > 1 ? m2 / static_cast<double>(count - 1) : 0.0; }
  double std_error() const { return count > 0 ? std::sqrt(variance() / static_cast<double>(count)) : 0.0; }
};

template <std::size_t K>
struct ChannelStats {
  std::array<RunningStat, K> channels{};
  std::size_t rejected = 0;

  void merge(const ChannelStats& other) {
    for (std::size_t k = 0; k < K; ++k) channels[k].merge(other.channels[k]);
    rejected += other.rejected;
  }
};

// Paths are grouped in fixed-size blocks; blocks are handed to workers in
// any order but merged in block order, so results do not depend on the
// worker count.
inline constexpr std::size_t kPathBlockSize = 1024;

inline unsigned resolve_workers(unsigned requested) {
  if (requested != 0) return requested;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

/// fn(i) returns the K channel values of path i, or nullopt for a rejected path.
template <std::size_t K, class PathFn>
ChannelStats<K> run_paths(std::size_t n_paths, unsigned workers, PathFn&& fn) {
  const std::size_t n_blocks = (n_paths + kPathBlockSize - 1) / kPathBlockSize;
  std::vector<ChannelStats<K>> blocks(n_blocks);
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::atomic<bool> failed{false};

  auto work = [&]() {
    for (;;) {
      const std::size_t b = next.fetch_add(1);
      if (b >= n_blocks || failed.load()) return;
      try {
        ChannelStats<K>& block = blocks[b];
        const std::size_t end = std::min(n_paths, (b + 1) * kPathBlockSize);
        for (std::size_t i = b * kPathBlockSize; i < end; ++i) {
          const std::optional<std::array<double, K>> values = fn(i);
          if (!values) {
            ++block.rejected;
            continue;
          }
          for (std::size_t k = 0; k < K; ++k) block.channels[k].add((*values)[k]);
        }
      } catch (...) {
        if (!failed.exchange(true)) failure = std::current_exception();
        return;
      }
    }
  };

  const unsigned n_workers = std::max(1u, std::min<unsigned>(resolve_workers(workers),
                                                             static_cast<unsigned>(std::max<std::size_t>(1, n_blocks))));
  if (n_workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(n_workers);
    for (unsigned w = 0; w < n_workers; ++w) pool.emplace_back(work);
    for (std::thread& th : pool) th.join();
  }
  if (failure) std::rethrow_exception(failure);

  ChannelStats<K> total;
  for (const ChannelStats<K>& block : blocks) total.merge(block);
  return total;
}

/// Runtime channel count variant: fn(i, values) fills `values` and returns
/// false for a rejected path.
struct DynamicStats {
  std::vector<RunningStat> channels;
  std::size_t rejected = 0;
};

DynamicStats run_paths_dynamic(std::size_t n_paths, unsigned workers, std::size_t n_channels,
                               const std::function<bool(std::size_t, std::vector<double>&)>& fn);

inline EstimatorResult to_result(const RunningStat& stat, std::size_t rejected) {
  EstimatorResult r;
  r.mean = stat.mean;
  r.std_error = stat.std_error();
  r.n_samples = stat.count;
  r.n_rejected = rejected;
  return r;
}

}  // namespace levygrad
