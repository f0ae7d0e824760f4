// Copyright (c) 2026 The mobex Authors.
// All rights reserved.
//
// This software is licensed under the Apache License, Version 2.0 (the "License").
// You may not use this file except in compliance with the License. You may
// obtain a copy of the License at http://www.apache.org/licenses/LICENSE-2.0.
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <functional>
#include <span>

namespace mobex {

/// Pairwise (cascade) summation. The reduction tree depends only on the
/// length of the input, so the result is reproducible for a fixed ordering.
double pairwise_sum(std::span<const double> values);

/// Runs `body(i)` for every i in [0, n) on up to `threads` workers.
/// Iterations must write to disjoint outputs; scheduling never affects results.
void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& body);

}  // namespace mobex
