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

#include "mobex/exposure.h"

#include <span>
#include <vector>

namespace mobex {

/// Surrogate z (home exposure) against reference x (blended exposure).
struct ErrorPair {
    double z = 0.0;
    double x = 0.0;
    double weight = 1.0;
};

/// Weighted population moments of the reference X and the error E = Z - X.
struct ErrorMoments {
    double sigma2 = 0.0;  // Var(X)
    double phi = 0.0;     // Cov(X, E)
    double omega2 = 0.0;  // Var(E)
    double total_weight = 0.0;
};

/// Frequency-weighted moments normalized by the total weight. Throws
/// EmptyPopulationError for zero total weight and DegenerateVarianceError
/// when X takes fewer than two distinct values.
ErrorMoments error_moments(std::span<const ErrorPair> pairs);

/// Moments of the H-for-HW substitution over OD pair exposures.
ErrorMoments error_moments(std::span<const PairExposure> pairs);

/// (sigma2 + phi) / (sigma2 + 2 phi + omega2). DomainError unless the
/// denominator is positive.
double bias_factor(const ErrorMoments& m);

struct RankSumResult {
    double u = 0.0;  // U statistic of the first sample
    double z = 0.0;
    double p = 1.0;  // two-sided
    double n_a = 0.0;
    double n_b = 0.0;
};

/// Wilcoxon rank-sum test with mid-ranks, tie-corrected variance, a 0.5
/// continuity correction and a two-sided normal p-value. An empty sample is
/// a ContractError.
RankSumResult wilcoxon_rank_sum(std::span<const double> a, std::span<const double> b);

/// Same test with frequency weights: equivalent to repeating each value
/// weight times. Weights must be non-negative.
RankSumResult wilcoxon_rank_sum(std::span<const double> a, std::span<const double> weights_a,
                                std::span<const double> b, std::span<const double> weights_b);

}  // namespace mobex
