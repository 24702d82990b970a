// Copyright 2026 The LVW Authors.
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

#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <thread>
#include <vector>

namespace lvw {

// Splits [0, total) into contiguous chunks, runs `fn(begin, end)` on up to
// `jobs` threads and returns the per-chunk results in chunk order, so merged
// output does not depend on the worker count.
template <class Fn>
auto parallel_chunks(std::uint64_t total, std::size_t jobs, Fn&& fn)
    -> std::vector<decltype(fn(std::uint64_t{}, std::uint64_t{}))> {
  using R = decltype(fn(std::uint64_t{}, std::uint64_t{}));
  jobs = std::max<std::size_t>(1, jobs);
  const std::uint64_t chunks =
      std::max<std::uint64_t>(1, std::min<std::uint64_t>(total, jobs * 4));
  std::vector<R> results(chunks);
  auto bounds = [&](std::uint64_t c) {
    return std::make_pair(total * c / chunks, total * (c + 1) / chunks);
  };
  if (jobs == 1) {
    for (std::uint64_t c = 0; c < chunks; ++c) {
      auto [b, e] = bounds(c);
      results[c] = fn(b, e);
    }
    return results;
  }
  std::vector<std::jthread> workers;
  for (std::size_t w = 0; w < jobs; ++w) {
    workers.emplace_back([&, w] {
      for (std::uint64_t c = w; c < chunks; c += jobs) {
        auto [b, e] = bounds(c);
        results[c] = fn(b, e);
      }
    });
  }
  workers.clear();
  return results;
}

}  // namespace lvw
