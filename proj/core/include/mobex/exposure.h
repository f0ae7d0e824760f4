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

#include "mobex/lodes.h"
#include "mobex/zonal.h"

#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace mobex {

/// Time split between home and workplace. The defaults are the rounded
/// 0.794 / 0.206 shares (1,801 working hours out of 8,760).
class HWWeights {
public:
    HWWeights() = default;
    /// Throws DomainError unless both lie in (0, 1) and sum to exactly 1.
    HWWeights(double home_fraction, double work_fraction);

    double home_fraction() const { return home_; }
    double work_fraction() const { return work_; }

private:
    double home_ = 0.794;
    double work_ = 0.206;
};

enum class Locus { H, W, HW };

std::string_view to_string(Locus l);

struct ExposureRecord {
    int year = 0;
    std::string group;
    Locus locus = Locus::H;
    Stratum stratum = Stratum::all;
    double mean = 0.0;
    double p10 = 0.0;
    double p90 = 0.0;
    double total_weight = 0.0;
};

/// error = H - HW; percent_error = 100 * (H - HW) / H.
struct ErrorRecord {
    int year = 0;
    std::string group;
    Stratum stratum = Stratum::all;
    double error = 0.0;
    double percent_error = 0.0;
};

/// Blended home/work exposure, home * h + work * w. Evaluated as
/// h + work * (w - h) so that hw_blend(h, h) == h exactly.
double hw_blend(double h, double w, const HWWeights& weights = {});

struct WeightedMean {
    double mean = 0.0;
    double total_weight = 0.0;
    double dropped_weight = 0.0;
    std::vector<std::string> dropped;  // weighted tracts with no concentration
};

/// sum(value * weight) / sum(weight) over tracts present in both maps.
/// Weighted tracts missing from `values` are dropped (and logged).
/// Throws EmptyPopulationError if the included weight is zero.
WeightedMean population_weighted_mean(const std::map<std::string, double>& values,
                                      const std::map<std::string, double>& weights);

/// Left-continuous inverse CDF: the smallest value whose cumulative weight
/// reaches p * sum(weights); no interpolation. Zero-weight entries are ignored.
/// Throws EmptyPopulationError when the total weight is zero, ContractError
/// for p outside [0, 1], mismatched lengths, or negative weights.
double weighted_percentile(std::span<const double> values, std::span<const double> weights, double p);

/// One population group of a worker table: the all-workers total or one category column.
struct TableGroup {
    std::string label;
    std::optional<std::size_t> column;  // nullopt = total column
};

/// "all" followed by every category of every schema present in `columns`.
std::vector<TableGroup> table_groups(const std::vector<std::string>& columns,
                                     std::span<const GroupSchema> schemas,
                                     std::string all_label = "all");

struct GroupExposures {
    std::vector<ExposureRecord> records;
    double dropped_weight = 0.0;  // all-workers weight in tracts missing from the surface
    std::vector<std::string> dropped_tracts;
    std::vector<std::string> omitted_groups;  // zero weight in this stratum
};

/// H (residence table) or W (workplace table) exposure for every group in
/// one stratum. `mask` is required when stratum != all. Throws ContractError
/// when the surface and table years differ.
GroupExposures compute_group_exposures(const TractSurface& surface, const WorkerTable& table,
                                       std::span<const GroupSchema> schemas, Stratum stratum,
                                       const UrbanMask* mask = nullptr);

/// Exposure of the workers on one OD tract pair.
struct PairExposure {
    std::string home_geoid;
    std::string work_geoid;
    double h = 0.0;
    double w = 0.0;
    double hw = 0.0;
    double weight = 0.0;
};

/// Group label of the all-workers OD group.
inline constexpr std::string_view kOdAllGroup = "od_all";

/// Pairs with positive weight for `group`, in OD order, restricted to the
/// stratum of the home tract. Pairs touching a tract missing from the surface
/// are skipped and their weight added to `dropped_weight`.
std::vector<PairExposure> od_pair_exposures(const TractSurface& surface, const ODMatrix& od,
                                            const TableGroup& group, Stratum stratum,
                                            const UrbanMask* mask, const HWWeights& weights,
                                            double* dropped_weight = nullptr);

struct HWExposures {
    std::vector<ExposureRecord> records;  // H, W, HW per group
    std::vector<ErrorRecord> errors;
    double dropped_weight = 0.0;
    std::size_t dropped_pairs = 0;
    std::vector<std::string> omitted_groups;
};

/// H, W and HW aggregated over the same OD population, plus the error
/// records. Throws EmptyPopulationError when no OD weight resolves in the
/// requested stratum.
HWExposures compute_hw_exposures(const TractSurface& surface, const ODMatrix& od,
                                 std::span<const GroupSchema> schemas, Stratum stratum,
                                 const UrbanMask* mask = nullptr, const HWWeights& weights = {});

}  // namespace mobex
