// Copyright 2026 The Glassbox Authors. All Rights Reserved.
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//     http://www.apache.org/licenses/LICENSE-2.0
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "glassbox/common.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <thread>

namespace glassbox {

int max_threads() {
  const char* env = std::getenv("GLASSBOX_THREADS");
  int hw = static_cast<int>(std::thread::hardware_concurrency());
  if (hw <= 0) hw = 1;
  if (env != nullptr && *env != '\0') {
    int v = std::atoi(env);
    if (v > 0) return std::min(v, 256);
  }
  return hw;
}

void parallel_for(int64_t n, const std::function<void(int64_t, int64_t)>& fn,
                  int64_t block) {
  if (n <= 0) return;
  const int threads = max_threads();
  if (threads <= 1 || n <= block) {
    fn(0, n);
    return;
  }
  const int64_t nblocks = (n + block - 1) / block;
  std::atomic<int64_t> next{0};
  auto worker = [&]() {
    for (;;) {
      int64_t b = next.fetch_add(1);
      if (b >= nblocks) break;
      int64_t lo = b * block;
      int64_t hi = std::min(n, lo + block);
      fn(lo, hi);
    }
  };
  std::vector<std::thread> pool;
  int nthreads = static_cast<int>(std::min<int64_t>(threads, nblocks));
  pool.reserve(nthreads - 1);
  for (int t = 1; t < nthreads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
}

std::string version_string() { return "0.1.0"; }

}  // namespace glassbox
