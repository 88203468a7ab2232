#pragma once

#include <algorithm>
#include <cstddef>
#include <future>
#include <thread>
#include <type_traits>
#include <vector>

namespace dyadic {

inline unsigned resolve_workers(unsigned requested) {
  return requested != 0 ? requested : std::max(1u, std::thread::hardware_concurrency());
}

/// fn(i) for i in [0, count) on up to `workers` threads (0 = hardware
/// concurrency). Results come back in index order whatever the scheduling.
/// The first exception thrown by any call is rethrown.
template <class Fn>
auto parallel_map(std::size_t count, unsigned workers, Fn fn)
    -> std::vector<std::invoke_result_t<Fn&, std::size_t>> {
  using R = std::invoke_result_t<Fn&, std::size_t>;
  std::vector<R> out(count);
  workers = static_cast<unsigned>(std::min<std::size_t>(resolve_workers(workers), count));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) out[i] = fn(i);
    return out;
  }
  // Static striding: worker w handles i = w, w + workers, ...
  std::vector<std::future<void>> tasks;
  for (unsigned w = 0; w < workers; ++w) {
    tasks.push_back(std::async(std::launch::async, [&, w] {
      for (std::size_t i = w; i < count; i += workers) out[i] = fn(i);
    }));
  }
  for (auto& t : tasks) t.wait();
  for (auto& t : tasks) t.get();
  return out;
}

}  // namespace dyadic
