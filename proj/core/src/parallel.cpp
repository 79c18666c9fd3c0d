#include "phasegbs/parallel.hpp"

#include <atomic>

namespace phasegbs {

namespace {
std::atomic<std::size_t> g_threads{0};
}

void set_thread_count(std::size_t threads) {
  g_threads.store(threads);
}

std::size_t thread_count() {
  const std::size_t n = g_threads.load();
  return n != 0 ? n : std::max<std::size_t>(1, std::thread::hardware_concurrency());
}

}  // namespace phasegbs
