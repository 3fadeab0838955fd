#pragma once

#include <algorithm>
#include <cstddef>
#include <thread>
#include <vector>

namespace cornerforge {

/// Worker count: `requested` when positive, else $CORNERFORGE_JOBS, else 1.
int resolve_jobs(int requested);

/// Run fn(begin, end, out) over contiguous strips of [begin, end) on up to
/// `jobs` threads and concatenate the per-strip outputs in strip order, so
/// the result is identical for every worker count.
template <class T, class Fn>
std::vector<T> parallel_strips(int begin, int end, int jobs, Fn&& fn) {
  const int n = std::max(0, end - begin);
  jobs = std::clamp(resolve_jobs(jobs), 1, std::max(1, n));
  if (jobs == 1) {
    std::vector<T> out;
    fn(begin, end, out);
    return out;
  }
  std::vector<std::vector<T>> parts(static_cast<std::size_t>(jobs));
  std::vector<std::thread> workers;
  workers.reserve(parts.size());
  for (int j = 0; j < jobs; ++j) {
    const int s0 = begin + static_cast<int>(static_cast<long long>(n) * j / jobs);
    const int s1 = begin + static_cast<int>(static_cast<long long>(n) * (j + 1) / jobs);
    workers.emplace_back([&fn, &parts, j, s0, s1] { fn(s0, s1, parts[static_cast<std::size_t>(j)]); });
  }
  for (auto& w : workers) w.join();
  std::vector<T> out;
  for (auto& part : parts) out.insert(out.end(), part.begin(), part.end());
  return out;
}

/// Apply fn(i) for i in [0, count) on up to `jobs` threads. fn must only
/// write to per-index state.
template <class Fn>
void parallel_for(std::size_t count, int jobs, Fn&& fn) {
  jobs = std::clamp(resolve_jobs(jobs), 1, static_cast<int>(std::max<std::size_t>(1, count)));
  if (jobs == 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::vector<std::thread> workers;
  for (int j = 0; j < jobs; ++j)
    workers.emplace_back([&fn, j, jobs, count] {
      for (std::size_t i = static_cast<std::size_t>(j); i < count; i += static_cast<std::size_t>(jobs))
        fn(i);
    });
  for (auto& w : workers) w.join();
}

}  // namespace cornerforge
