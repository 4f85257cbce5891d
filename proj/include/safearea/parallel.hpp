// Copyright 2026 The safearea Authors.
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

#ifndef SAFEAREA_PARALLEL_HPP_
#define SAFEAREA_PARALLEL_HPP_

#include <cstddef>
#include <functional>

namespace safearea {

// Number of workers to use when the caller passes 0.
unsigned default_workers() noexcept;

// Runs body(i) for i in [0, count) on up to `workers` threads (0 = hardware
// concurrency). Tasks are handed out dynamically, so body must only write to
// slots owned by index i. The first exception thrown by any task is rethrown
// after all workers have joined.
void parallel_for(std::size_t count, unsigned workers,
                  const std::function<void(std::size_t)>& body);

}  // namespace safearea

#endif  // SAFEAREA_PARALLEL_HPP_
