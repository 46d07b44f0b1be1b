#pragma once

#include <cstddef>
#include <exception>
#include <mutex>

namespace qedcs {

// Runs fn(i) for i in [0, n), in parallel when OpenMP is enabled.  The first
// exception thrown by any iteration is rethrown on the calling thread.
template <class Fn>
void parallel_for(std::size_t n, Fn&& fn) {
  std::exception_ptr error;
  std::mutex mu;
  const long long count = static_cast<long long>(n);
#pragma omp parallel for schedule(dynamic, 1)
  for (long long i = 0; i < count; ++i) {
    {
      std::lock_guard<std::mutex> lock(mu);
      if (error) continue;
    }
    try {
      fn(static_cast<std::size_t>(i));
    } catch (...) {
      std::lock_guard<std::mutex> lock(mu);
      if (!error) error = std::current_exception();
    }
  }
  if (error) std::rethrow_exception(error);
}

}  // namespace qedcs
