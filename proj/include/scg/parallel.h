//
// Copyright 2026 The SCG Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//
#ifndef SCG_PARALLEL_H_
#define SCG_PARALLEL_H_

#include <omp.h>

#include <cstddef>
#include <exception>
#include <mutex>

namespace scg {

// Every data-parallel kernel takes one of these. kSerial is the reference
// path the tests compare the OpenMP path against; both must give identical
// results because per-item seeds never depend on scheduling.
enum class ExecutionPolicy { kSerial, kParallel };

inline std::size_t AvailableThreads() {
  return static_cast<std::size_t>(omp_get_max_threads());
}

// Calls body(i) for i in [0, n). The first exception thrown by any
// iteration is rethrown after the loop finishes.
template <typename Body>
void ParallelFor(std::size_t n, ExecutionPolicy policy, Body&& body,
                 std::size_t num_threads = 0) {
  if (policy == ExecutionPolicy::kSerial || n < 2) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::exception_ptr failure;
  std::mutex mu;
  const int threads =
      static_cast<int>(num_threads == 0 ? AvailableThreads() : num_threads);
  const auto count = static_cast<long long>(n);
#pragma omp parallel for schedule(dynamic) num_threads(threads)
  for (long long i = 0; i < count; ++i) {
    try {
      body(static_cast<std::size_t>(i));
    } catch (...) {
      std::lock_guard<std::mutex> lock(mu);
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
}

}  // namespace scg

#endif  // SCG_PARALLEL_H_
