//
// retrochem - retrosynthesis evaluation and instruction-data toolkit
// SPDX-License-Identifier: Apache-2.0
//

#ifndef RETROCHEM_UTIL_PARALLEL_H_
#define RETROCHEM_UTIL_PARALLEL_H_

#include <algorithm>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace retrochem {

// Runs fn(i) for i in [0, n) on up to `threads` threads with a strided
// split. Callers keep output deterministic by writing only to slot i. The
// first exception (by thread) is rethrown after all threads finish.
template <class Fn>
void parallel_for(std::size_t n, unsigned threads, Fn &&fn) {
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(n)));
  if (threads <= 1) {
    for (std::size_t i = 0; i < n; ++i)
      fn(i);
    return;
  }
  std::vector<std::exception_ptr> errors(threads);
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < threads; ++t) {
    pool.emplace_back([&, t]() {
      try {
        for (std::size_t i = t; i < n; i += threads)
          fn(i);
      } catch (...) {
        errors[t] = std::current_exception();
      }
    });
  }
  for (std::thread &th: pool)
    th.join();
  for (const std::exception_ptr &e: errors) {
    if (e)
      std::rethrow_exception(e);
  }
}

}  // namespace retrochem

#endif  // RETROCHEM_UTIL_PARALLEL_H_
