#include "core/parallel.hpp"

#include <cstdlib>
#include <exception>
#include <thread>
#include <vector>

namespace cylstokes {

int thread_count() {
  const char* env = std::getenv("CYLSTOKES_THREADS");
  if (!env) return 1;
  const int n = std::atoi(env);
  return n < 1 ? 1 : (n > 64 ? 64 : n);
}

void parallel_for(int n, const std::function<void(int)>& body) {
  if (n <= 0) return;
  const int workers = std::min(thread_count(), n);
  if (workers == 1) {
    for (int i = 0; i < n; ++i) body(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  const int chunk = (n + workers - 1) / workers;
  std::vector<std::exception_ptr> errors(workers);
  for (int w = 0; w < workers; ++w) {
    const int lo = w * chunk;
    const int hi = std::min(n, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([lo, hi, &body, &err = errors[w]] {
      try {
        for (int i = lo; i < hi; ++i) body(i);
      } catch (...) {
        err = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  // Rethrow the lowest-chunk failure so the surfaced error is thread-count independent.
  for (auto& err : errors)
    if (err) std::rethrow_exception(err);
}

}  // namespace cylstokes
