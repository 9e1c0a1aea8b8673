// Copyright 2026 The trl Authors
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

#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <thread>
#include <vector>

namespace trl {

/// Execution policy for enumeration-heavy routines. Results never depend on
/// the worker count: domains are split into contiguous chunks and merged in
/// chunk order.
struct Exec {
  unsigned workers = 1;
};

namespace parallel {

struct Range {
  std::uint64_t begin = 0;
  std::uint64_t end = 0;
};

inline std::vector<Range> split(std::uint64_t n, unsigned parts) {
  parts = std::max(1U, parts);
  std::vector<Range> out;
  const std::uint64_t chunk = (n + parts - 1) / parts;
  for (std::uint64_t b = 0; b < n; b += chunk) out.push_back({b, std::min(n, b + chunk)});
  if (out.empty()) out.push_back({0, 0});
  return out;
}

/// Runs fn(range) on each chunk of [0, n) and returns the per-chunk results
/// in chunk order.
template <class Result, class Fn>
std::vector<Result> map_chunks(std::uint64_t n, const Exec& exec, Fn&& fn) {
  const auto ranges = split(n, exec.workers);
  std::vector<Result> results(ranges.size());
  if (ranges.size() == 1 || exec.workers <= 1) {
    for (std::size_t i = 0; i < ranges.size(); ++i) results[i] = fn(ranges[i]);
    return results;
  }
  std::vector<std::exception_ptr> errors(ranges.size());
  std::vector<std::thread> threads;
  threads.reserve(ranges.size());
  for (std::size_t i = 0; i < ranges.size(); ++i) {
    threads.emplace_back([&, i] {
      try {
        results[i] = fn(ranges[i]);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    });
  }
  for (auto& t : threads) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return results;
}

}  // namespace parallel
}  // namespace trl
