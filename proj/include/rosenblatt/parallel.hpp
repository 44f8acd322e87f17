// Copyright 2026 The rosenblatt Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef ROSENBLATT_PARALLEL_HPP
#define ROSENBLATT_PARALLEL_HPP

#include <algorithm>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace rosenblatt {

/// Number of worker threads used by parallel_for (0 = hardware concurrency).
inline std::size_t& worker_threads() {
  static std::size_t n = 0;
  return n;
}

/// Calls body(i) for i in [0, count) on a fixed pool of threads. Each index is
/// processed exactly once, so results written to per-index slots do not depend
/// on the thread count.
template <class Body>
void parallel_for(std::size_t count, Body&& body) {
  std::size_t threads = worker_threads();
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min(threads, count);
  if (threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (std::size_t t = 0; t < threads; ++t) {
    pool.emplace_back([&, t] {
      try {
        for (std::size_t i = t; i < count; i += threads) body(i);
      } catch (...) {
        const std::lock_guard<std::mutex> lock{error_mutex};
        if (!error) error = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace rosenblatt

#endif
