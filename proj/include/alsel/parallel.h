// Copyright 2026 The Authors.
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

#ifndef ALSEL_PARALLEL_H_
#define ALSEL_PARALLEL_H_

#include <cstddef>
#include <functional>

namespace alsel {

// Calls fn(i) for every i in [0, n) on up to `workers` threads. Each index
// runs exactly once. If any call throws, the exception from the lowest
// failing index is rethrown after all threads join, so failures are
// reported identically for every worker count.
void ParallelFor(std::size_t n, int workers,
                 const std::function<void(std::size_t)>& fn);

}  // namespace alsel

#endif  // ALSEL_PARALLEL_H_
