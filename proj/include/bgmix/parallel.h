// Copyright 2026 The bgmix Authors. All Rights Reserved.
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

#ifndef BGMIX_PARALLEL_H_
#define BGMIX_PARALLEL_H_

#include <cstddef>
#include <functional>

namespace bgmix {

// std::thread::hardware_concurrency(), at least 1.
int default_worker_count();

// Calls fn(i) once for every i in [0, n) on up to `workers` threads. Items
// are claimed dynamically, so fn must not depend on which thread runs it.
// If any call throws, the exception from the lowest failing index is
// rethrown after all threads join.
void parallel_for(std::size_t n, int workers,
                  const std::function<void(std::size_t)>& fn);

}  // namespace bgmix

#endif  // BGMIX_PARALLEL_H_
