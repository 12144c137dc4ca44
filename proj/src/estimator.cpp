#include "levygrad/estimator.hpp"

namespace levygrad {

DynamicStats run_paths_dynamic(std::size_t n_paths, unsigned workers, std::size_t n_channels,
                               const std::function<bool(std::size_t, std::vector<double>&)>& fn) {
  const std::size_t n_blocks = (n_paths + kPathBlockSize - 1) / kPathBlockSize;
  std::vector<DynamicStats> blocks(n_blocks);
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr failure;

  auto work = [&]() {
    std::vector<double> values(n_channels);
    for (;;) {
      const std::size_t b = next.fetch_add(1);
      if (b >= n_blocks || failed.load()) return;
      try {
        DynamicStats& block = blocks[b];
        block.channels.assign(n_channels, RunningStat{});
        const std::size_t end = std::min(n_paths, (b + 1) * kPathBlockSize);
        for (std::size_t i = b * kPathBlockSize; i < end; ++i) {
          if (!fn(i, values)) {
            ++block.rejected;
            continue;
          }
          for (std::size_t k = 0; k < n_channels; ++k) block.channels[k].add(values[k]);
        }
      } catch (...) {
        if (!failed.exchange(true)) failure = std::current_exception();
        return;
      }
    }
  };

  const unsigned n_workers =
      std::max(1u, std::min<unsigned>(resolve_workers(workers), static_cast<unsigned>(std::max<std::size_t>(1, n_blocks))));
  if (n_workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < n_workers; ++w) pool.emplace_back(work);
    for (std::thread& th : pool) th.join();
  }
  if (failure) std::rethrow_exception(failure);

  DynamicStats total;
  total.channels.assign(n_channels, RunningStat{});
  for (const DynamicStats& block : blocks) {
    for (std::size_t k = 0; k < n_channels; ++k) total.channels[k].merge(block.channels[k]);
    total.rejected += block.rejected;
  }
  return total;
}

}  // namespace levygrad
