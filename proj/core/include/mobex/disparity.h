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
#include <string>
#include <vector>

namespace mobex {

/// Mean (or other statistic) of one group.
struct GroupValue {
    std::string group;
    double value = 0.0;
};

struct GapResult {
    std::string characteristic;
    std::string most_exposed;
    std::string least_exposed;
    double most_value = 0.0;
    double least_value = 0.0;
    double absolute_diff = 0.0;
    double percent_diff = 0.0;  // percent of the national value
    double ratio = 0.0;         // inf when the least-exposed value is 0
};

/// Most minus least exposed group. Ties go to the lexicographically smaller
/// label. Throws InsufficientGroupsError for fewer than two groups and
/// DomainError for a non-positive national value.
GapResult extreme_group_gap(std::string characteristic, std::span<const GroupValue> groups,
                            double national);

/// One tract as seen by the bin curve.
struct BinTract {
    std::string geoid;
    double fraction = 0.0;       // share of the tract's workers in the group
    double count = 0.0;          // group workers in the tract
    double concentration = 0.0;  // tract PM2.5
};

struct Bin {
    std::size_t index = 0;  // 1-based
    std::size_t n_tracts = 0;
    double pm25 = 0.0;      // NaN when the bin holds no group workers
};

struct PercentileBinCurve {
    std::vector<Bin> bins;
};

/// Tracts ranked by group fraction (ties by geoid) and cut into `n_bins`
/// contiguous bins whose sizes differ by at most one, larger bins first.
/// Each bin value is the group-weighted mean concentration of its tracts.
/// Throws InsufficientTractsError when there are fewer tracts than bins and
/// ContractError when n_bins < 2.
PercentileBinCurve percentile_bin_curve(std::vector<BinTract> tracts, std::size_t n_bins);

/// Top minus bottom bin of a 10-bin curve. ContractError for any other bin
/// count or an undefined end bin.
double decile_contrast(const PercentileBinCurve& curve);

/// One tract as seen by the concentration-decile share.
struct ShareTract {
    std::string geoid;
    double concentration = 0.0;
    double count = 0.0;  // group workers
    double total = 0.0;  // all workers, > 0
};

struct DecileShares {
    std::vector<double> mean_fraction;  // 10 entries, lowest concentration first
    double difference = 0.0;            // top minus bottom
};

/// Tracts ranked by concentration (ties by geoid), cut into ten bins as in
/// percentile_bin_curve; each bin reports the unweighted mean group fraction.
DecileShares population_share_by_concentration_decile(std::vector<ShareTract> tracts);

struct AtkinsonInput {
    std::vector<double> shares;  // f_j > 0, summing to 1
    std::vector<double> values;  // y_j > 0
    double epsilon = 0.75;
};

/// Between-group Atkinson index. Uses the geometric-mean form at epsilon 1.
/// Throws DomainError for non-positive values or negative epsilon and
/// ContractError for malformed shares.
double atkinson(const AtkinsonInput& input);

/// Atkinson index over group mean concentrations, computed on their
/// inverses with group weight shares. Throws DomainError for a zero mean.
double atkinson_of_concentrations(std::span<const ExposureRecord> records, double epsilon);

/// (group - state) / national. Throws DomainError unless national > 0.
double state_disparity(double group_mean, double state_mean, double national_mean);

/// Percent of the weight with value strictly above `threshold`.
/// Throws EmptyPopulationError when the weights sum to zero.
double threshold_share(std::span<const double> values, std::span<const double> weights,
                       double threshold);

/// Population standard deviation over mean of the per-group shares.
/// Throws InsufficientGroupsError for fewer than two groups and DomainError
/// when the mean is zero.
double cov_of_shares(std::span<const double> qs);

/// The characteristic part of a "characteristic:label" group name.
std::string characteristic_of(std::string_view group);

}  // namespace mobex
