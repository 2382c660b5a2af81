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

#ifndef GLASSBOX_COMMON_HPP
#define GLASSBOX_COMMON_HPP

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace glassbox {

// Error taxonomy maps 1:1 onto process exit codes (see c_api.h):
// validation -> 2, data -> 3, internal invariant breach -> 4.
class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(const std::string& msg) : std::runtime_error(msg) {}
};

class DataError : public std::runtime_error {
 public:
  explicit DataError(const std::string& msg) : std::runtime_error(msg) {}
};

class InternalError : public std::logic_error {
 public:
  explicit InternalError(const std::string& msg) : std::logic_error(msg) {}
};

// Row-level issue found while parsing or transforming input tables. Never
// fatal on its own; callers decide based on lenient/strict mode.
struct Diagnostic {
  std::string table;
  int64_t line = 0;  // 1-based data line within the source file, 0 if n/a
  std::string message;
};

using Diagnostics = std::vector<Diagnostic>;

// Thread cap for all internal parallelism. Reads GLASSBOX_THREADS once per
// call; 0 or unset means hardware concurrency.
int max_threads();

// Runs fn(begin, end) over [0, n) split into fixed-size blocks. Block
// boundaries do not depend on the thread count, so any per-block reduction
// done in block order is bit-stable regardless of parallelism.
void parallel_for(int64_t n, const std::function<void(int64_t, int64_t)>& fn,
                  int64_t block = 2048);

std::string version_string();

}  // namespace glassbox

#endif  // GLASSBOX_COMMON_HPP
