#pragma once

#include <algorithm>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <type_traits>
#include <vector>

namespace qtr {

// Apply `fn` to every element of `inputs` on up to `jobs` threads. Results
// keep input order regardless of completion order; the first exception
// thrown by any task is rethrown after all threads join.
template <class In, class Fn>
auto parallel_map(const std::vector<In>& inputs, Fn fn, int jobs)
    -> std::vector<std::invoke_result_t<Fn, const In&>> {
  using Out = std::invoke_result_t<Fn, const In&>;
  std::vector<Out> out(inputs.size());
  const std::size_t workers =
      std::min<std::size_t>(inputs.size(), static_cast<std::size_t>(std::max(jobs, 1)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < inputs.size(); ++i) out[i] = fn(inputs[i]);
    return out;
  }
  std::mutex m;
  std::size_t next = 0;
  std::exception_ptr error;
  auto work = [&] {
    for (;;) {
      std::size_t i;
      {
        std::lock_guard lock(m);
        if (next >= inputs.size() || error) return;
        i = next++;
      }
      try {
        out[i] = fn(inputs[i]);
      } catch (...) {
        std::lock_guard lock(m);
        if (!error) error = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
  return out;
}

}  // namespace qtr
