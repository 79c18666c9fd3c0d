#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <optional>
#include <thread>
#include <vector>

namespace phasegbs {

/// Worker threads used by the estimators. 0 selects the hardware concurrency.
void set_thread_count(std::size_t threads);
std::size_t thread_count();

/// Computes `produce(i)` for i in [0, count) on the worker threads and hands
/// each result to `consume(i, result)` strictly in index order.
///
/// Work proceeds in waves of `thread_count()` items, so reductions performed
/// in `consume` are bit-identical for any thread count.
template <class Produce, class Consume>
void for_each_ordered(std::size_t count, Produce&& produce, Consume&& consume) {
  using Result = decltype(produce(std::size_t{0}));
  const std::size_t width = std::max<std::size_t>(1, thread_count());
  if (width == 1) {
    for (std::size_t i = 0; i < count; ++i) consume(i, produce(i));
    return;
  }
  std::vector<std::optional<Result>> slots(width);
  std::vector<std::exception_ptr> errors(width);
  for (std::size_t start = 0; start < count; start += width) {
    const std::size_t n = std::min(width, count - start);
    {
      std::vector<std::jthread> workers;
      workers.reserve(n);
      for (std::size_t w = 0; w < n; ++w) {
        workers.emplace_back([&, w] {
          try {
            slots[w].emplace(produce(start + w));
          } catch (...) {
            errors[w] = std::current_exception();
          }
        });
      }
    }
    for (std::size_t w = 0; w < n; ++w) {
      if (errors[w]) std::rethrow_exception(errors[w]);
      consume(start + w, std::move(*slots[w]));
      slots[w].reset();
    }
  }
}

}  // namespace phasegbs
