#pragma once

#include <algorithm>
#include <cstddef>
#include <future>
#include <thread>
#include <type_traits>
#include <vector>

namespace periodlab::detail {

/// Evaluates fn(0..n-1) on worker threads and returns results in index
/// order. Exceptions propagate from the lowest failing index.
template <class Fn>
auto parallel_map(std::size_t n, const Fn& fn) -> std::vector<std::invoke_result_t<const Fn&, std::size_t>> {
  using R = std::invoke_result_t<const Fn&, std::size_t>;
  const std::size_t workers = std::max<std::size_t>(1, std::min<std::size_t>(n, std::thread::hardware_concurrency()));
  std::vector<R> out;
  out.reserve(n);
  if (workers <= 1 || n < 2) {
    for (std::size_t i = 0; i < n; ++i) out.push_back(fn(i));
    return out;
  }
  std::vector<std::future<R>> pending;
  pending.reserve(n);
  for (std::size_t i = 0; i < n; ++i) pending.push_back(std::async(std::launch::async, fn, i));
  for (auto& p : pending) out.push_back(p.get());
  return out;
}

}  // namespace periodlab::detail
