// Index-parallel map whose output order never depends on scheduling.
#ifndef FLOQGATE_PARALLEL_HPP
#define FLOQGATE_PARALLEL_HPP

#include <algorithm>
#include <cstddef>
#include <future>
#include <thread>
#include <type_traits>
#include <vector>

namespace floqgate {

/// out[i] = fn(i) for i in [0, n). Work is split into contiguous chunks, one
/// per hardware thread; exceptions surface from the first failing chunk.
template <typename Fn>
auto parallel_map(std::size_t n, Fn&& fn) -> std::vector<std::invoke_result_t<Fn&, std::size_t>> {
  using T = std::invoke_result_t<Fn&, std::size_t>;
  std::vector<T> out;
  out.reserve(n);
  const std::size_t workers =
      std::min<std::size_t>(n, std::max(1u, std::thread::hardware_concurrency()));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) out.push_back(fn(i));
    return out;
  }
  const std::size_t chunk = (n + workers - 1) / workers;
  std::vector<std::future<std::vector<T>>> tasks;
  for (std::size_t lo = 0; lo < n; lo += chunk) {
    const std::size_t hi = std::min(n, lo + chunk);
    tasks.push_back(std::async(std::launch::async, [&fn, lo, hi] {
      std::vector<T> part;
      part.reserve(hi - lo);
      for (std::size_t i = lo; i < hi; ++i) part.push_back(fn(i));
      return part;
    }));
  }
  for (auto& task : tasks)
    for (auto& v : task.get()) out.push_back(std::move(v));
  return out;
}

}  // namespace floqgate

#endif  // FLOQGATE_PARALLEL_HPP
