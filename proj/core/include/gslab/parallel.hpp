#ifndef GSLAB_PARALLEL_HPP
#define GSLAB_PARALLEL_HPP

#include <cstdlib>
#include <future>
#include <thread>
#include <vector>

namespace gslab {

/// Thread cap for data-parallel sweeps. GSLAB_THREADS=1 forces serial runs.
inline unsigned thread_cap() {
  if (const char* env = std::getenv("GSLAB_THREADS")) {
    long n = std::strtol(env, nullptr, 10);
    if (n >= 1) return static_cast<unsigned>(n);
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw ? hw : 1;
}

/// Index-parallel map over [0, n). Results land at fixed indices, so output
/// order (and therefore every downstream report) is independent of scheduling.
template <typename Fn>
void parallel_for(std::size_t n, Fn&& fn) {
  unsigned workers = thread_cap();
  if (workers <= 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  if (workers > n) workers = static_cast<unsigned>(n);
  std::vector<std::future<void>> tasks;
  tasks.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    tasks.push_back(std::async(std::launch::async, [&, w] {
      for (std::size_t i = w; i < n; i += workers) fn(i);
    }));
  }
  for (auto& t : tasks) t.get();
}

} // namespace gslab

#endif
