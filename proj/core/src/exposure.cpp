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

#include "mobex/exposure.h"

#include "mobex/error.h"
#include "mobex/log.h"
#include "mobex/numeric.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <fmt/format.h>

namespace mobex {

namespace {

bool in_stratum(const std::string& geoid, Stratum stratum, const UrbanMask* mask) {
    if (stratum == Stratum::all) {
        return true;
    }
    const auto it = mask->classification.find(geoid);
    return it != mask->classification.end() && it->second == stratum;
}

void require_mask(Stratum stratum, const UrbanMask* mask) {
    if (stratum != Stratum::all && mask == nullptr) {
        throw ContractError("an urban mask is required for urban/rural strata");
    }
}

double weighted_sum(std::span<const double> values, std::span<const double> weights,
                    std::vector<double>& scratch) {
    scratch.resize(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
        scratch[i] = values[i] * weights[i];
    }
    return pairwise_sum(scratch);
}

ExposureRecord summarize(int year, const std::string& group, Locus locus, Stratum stratum,
                         std::span<const double> values, std::span<const double> weights,
                         double total_weight, std::vector<double>& scratch) {
    ExposureRecord rec;
    rec.year = year;
    rec.group = group;
    rec.locus = locus;
    rec.stratum = stratum;
    rec.total_weight = total_weight;
    rec.mean = weighted_sum(values, weights, scratch) / total_weight;
    rec.p10 = weighted_percentile(values, weights, 0.10);
    rec.p90 = weighted_percentile(values, weights, 0.90);
    return rec;
}

}  // namespace

HWWeights::HWWeights(double home_fraction, double work_fraction)
    : home_(home_fraction), work_(work_fraction) {
    if (!(home_ > 0.0 && home_ < 1.0) || !(work_ > 0.0 && work_ < 1.0)) {
        throw DomainError("home and work fractions must lie in (0, 1)");
    }
    if (home_ + work_ != 1.0) {
        throw DomainError(fmt::format("home and work fractions must sum to 1 (got {} + {})",
                                      home_, work_));
    }
}

std::string_view to_string(Locus l) {
    switch (l) {
        case Locus::H: return "H";
        case Locus::W: return "W";
        case Locus::HW: return "HW";
    }
    return "H";
}

double hw_blend(double h, double w, const HWWeights& weights) {
    return h + weights.work_fraction() * (w - h);
}

WeightedMean population_weighted_mean(const std::map<std::string, double>& values,
                                      const std::map<std::string, double>& weights) {
    WeightedMean out;
    std::vector<double> v;
    std::vector<double> w;
    std::vector<double> dropped_w;
    for (const auto& [geoid, weight] : weights) {
        const auto it = values.find(geoid);
        if (it == values.end()) {
            if (weight != 0.0) {
                out.dropped.push_back(geoid);
                dropped_w.push_back(weight);
            }
            continue;
        }
        v.push_back(it->second);
        w.push_back(weight);
    }
    out.dropped_weight = pairwise_sum(dropped_w);
    if (!out.dropped.empty()) {
        log::warn("exposure", fmt::format("dropped weight {} from {} tract(s) without a "
                                          "concentration",
                                          out.dropped_weight, out.dropped.size()));
    }
    out.total_weight = pairwise_sum(w);
    if (!(out.total_weight > 0.0)) {
        throw EmptyPopulationError("population weights sum to zero");
    }
    std::vector<double> scratch;
    out.mean = weighted_sum(v, w, scratch) / out.total_weight;
    return out;
}

double weighted_percentile(std::span<const double> values, std::span<const double> weights, double p) {
    if (values.size() != weights.size()) {
        throw ContractError("values and weights differ in length");
    }
    if (!(p >= 0.0 && p <= 1.0)) {
        throw ContractError(fmt::format("percentile fraction {} outside [0, 1]", p));
    }
    std::vector<std::size_t> order;
    order.reserve(values.size());
    double total = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (weights[i] < 0.0 || !std::isfinite(weights[i])) {
            throw ContractError("weights must be finite and non-negative");
        }
        if (weights[i] > 0.0) {
            order.push_back(i);
            total += weights[i];
        }
    }
    if (order.empty() || !(total > 0.0)) {
        throw EmptyPopulationError("percentile of an empty population");
    }
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    // A few ulps of slack so that p = 0.1 stored in binary still treats a
    // cumulative weight of exactly total / 10 as reaching the target.
    const double target = p * total * (1.0 - 8.0 * std::numeric_limits<double>::epsilon());
    double cum = 0.0;
    for (std::size_t i : order) {
        cum += weights[i];
        if (cum >= target) {
            return values[i];
        }
    }
    return values[order.back()];
}

std::vector<TableGroup> table_groups(const std::vector<std::string>& columns,
                                     std::span<const GroupSchema> schemas, std::string all_label) {
    std::vector<TableGroup> groups;
    groups.push_back({std::move(all_label), std::nullopt});
    for (const auto& s : schemas) {
        std::vector<TableGroup> found;
        for (const auto& c : s.categories) {
            const auto it = std::find(columns.begin(), columns.end(), c.code);
            if (it == columns.end()) {
                found.clear();
                break;
            }
            found.push_back({group_label(s, c), static_cast<std::size_t>(it - columns.begin())});
        }
        groups.insert(groups.end(), found.begin(), found.end());
    }
    return groups;
}

GroupExposures compute_group_exposures(const TractSurface& surface, const WorkerTable& table,
                                       std::span<const GroupSchema> schemas, Stratum stratum,
                                       const UrbanMask* mask) {
    if (surface.year != table.year) {
        throw ContractError(fmt::format("surface year {} does not match table year {}",
                                        surface.year, table.year));
    }
    require_mask(stratum, mask);
    const Locus locus = table.role == TableRole::residence ? Locus::H : Locus::W;

    GroupExposures out;
    std::vector<double> values;
    std::vector<const TractCounts*> rows;
    std::vector<double> dropped;
    for (const auto& [geoid, tc] : table.rows) {
        if (!in_stratum(geoid, stratum, mask)) {
            continue;
        }
        const auto v = surface.find(geoid);
        if (!v) {
            if (tc.total != 0) {
                out.dropped_tracts.push_back(geoid);
                dropped.push_back(static_cast<double>(tc.total));
            }
            continue;
        }
        values.push_back(*v);
        rows.push_back(&tc);
    }
    out.dropped_weight = pairwise_sum(dropped);
    if (!out.dropped_tracts.empty()) {
        log::warn("exposure",
                  fmt::format("{} {} stratum={}: dropped weight {} from {} tract(s) without a "
                              "concentration",
                              table.year, to_string(locus), to_string(stratum), out.dropped_weight,
                              out.dropped_tracts.size()));
    }

    std::vector<double> weights(values.size());
    std::vector<double> scratch;
    for (const auto& group : table_groups(table.columns, schemas)) {
        for (std::size_t i = 0; i < rows.size(); ++i) {
            weights[i] = static_cast<double>(group.column ? rows[i]->counts[*group.column]
                                                          : rows[i]->total);
        }
        const double total = pairwise_sum(weights);
        if (!(total > 0.0)) {
            out.omitted_groups.push_back(group.label);
            log::info("exposure", fmt::format("{} {} stratum={}: group {} has zero weight; omitted",
                                              table.year, to_string(locus), to_string(stratum),
                                              group.label));
            continue;
        }
        out.records.push_back(
            summarize(table.year, group.label, locus, stratum, values, weights, total, scratch));
    }
    return out;
}

std::vector<PairExposure> od_pair_exposures(const TractSurface& surface, const ODMatrix& od,
                                            const TableGroup& group, Stratum stratum,
                                            const UrbanMask* mask, const HWWeights& weights,
                                            double* dropped_weight) {
    require_mask(stratum, mask);
    std::vector<PairExposure> pairs;
    std::vector<double> dropped;
    for (const auto& e : od.entries) {
        const auto count = group.column ? e.counts[*group.column] : e.total;
        if (count == 0 || !in_stratum(e.home_geoid, stratum, mask)) {
            continue;
        }
        const auto h = surface.find(e.home_geoid);
        const auto w = surface.find(e.work_geoid);
        if (!h || !w) {
            dropped.push_back(static_cast<double>(count));
            continue;
        }
        pairs.push_back({e.home_geoid, e.work_geoid, *h, *w, hw_blend(*h, *w, weights),
                         static_cast<double>(count)});
    }
    if (dropped_weight != nullptr) {
        *dropped_weight = pairwise_sum(dropped);
    }
    return pairs;
}

HWExposures compute_hw_exposures(const TractSurface& surface, const ODMatrix& od,
                                 std::span<const GroupSchema> schemas, Stratum stratum,
                                 const UrbanMask* mask, const HWWeights& weights) {
    if (surface.year != od.year) {
        throw ContractError(fmt::format("surface year {} does not match OD year {}", surface.year,
                                        od.year));
    }
    require_mask(stratum, mask);
    HWExposures out;

    std::vector<double> h;
    std::vector<double> w;
    std::vector<double> hw;
    std::vector<double> wt;
    std::vector<double> scratch;
    bool first = true;
    for (const auto& group : table_groups(od.columns, schemas, std::string(kOdAllGroup))) {
        double dropped = 0.0;
        const auto pairs = od_pair_exposures(surface, od, group, stratum, mask, weights, &dropped);
        if (first) {
            out.dropped_weight = dropped;
            for (const auto& e : od.entries) {
                if (e.total != 0 && in_stratum(e.home_geoid, stratum, mask) &&
                    (!surface.find(e.home_geoid) || !surface.find(e.work_geoid))) {
                    ++out.dropped_pairs;
                }
            }
            if (out.dropped_pairs > 0) {
                log::warn("exposure",
                          fmt::format("{} HW stratum={}: dropped {} OD pair(s) with weight {} "
                                      "touching tracts without a concentration",
                                      od.year, to_string(stratum), out.dropped_pairs, dropped));
            }
            if (pairs.empty() && stratum == Stratum::all) {
                throw EmptyPopulationError(
                    fmt::format("OD matrix for {} has no resolvable worker weight", od.year));
            }
        }
        first = false;

        h.clear();
        w.clear();
        hw.clear();
        wt.clear();
        for (const auto& p : pairs) {
            h.push_back(p.h);
            w.push_back(p.w);
            hw.push_back(p.hw);
            wt.push_back(p.weight);
        }
        const double total = pairwise_sum(wt);
        if (!(total > 0.0)) {
            out.omitted_groups.push_back(group.label);
            log::info("exposure", fmt::format("{} HW stratum={}: group {} has zero weight; omitted",
                                              od.year, to_string(stratum), group.label));
            continue;
        }
        const auto rh = summarize(od.year, group.label, Locus::H, stratum, h, wt, total, scratch);
        const auto rw = summarize(od.year, group.label, Locus::W, stratum, w, wt, total, scratch);
        const auto rhw = summarize(od.year, group.label, Locus::HW, stratum, hw, wt, total, scratch);
        out.records.push_back(rh);
        out.records.push_back(rw);
        out.records.push_back(rhw);

        ErrorRecord err;
        err.year = od.year;
        err.group = group.label;
        err.stratum = stratum;
        err.error = rh.mean - rhw.mean;
        err.percent_error = rh.mean > 0.0 ? 100.0 * err.error / rh.mean
                                          : std::numeric_limits<double>::quiet_NaN();
        out.errors.push_back(err);
    }
    return out;
}

}  // namespace mobex
