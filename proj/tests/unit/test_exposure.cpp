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

#include "mobex/error.h"
#include "mobex/exposure.h"

#include "oracles.h"

#include <fmt/format.h>
#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <random>

namespace mobex {
namespace {

const std::vector<GroupSchema> kSex{
    GroupSchema{Characteristic::sex, {{"CS01", "male"}, {"CS02", "female"}}, true}};
const std::vector<GroupSchema> kOdAge{
    GroupSchema{Characteristic::od_age, {{"SA01", "young"}, {"SA02", "old"}}, true}};

const ExposureRecord& find(const std::vector<ExposureRecord>& rs, std::string_view group, Locus l) {
    for (const auto& r : rs) {
        if (r.group == group && r.locus == l) {
            return r;
        }
    }
    throw std::runtime_error(fmt::format("no record {}", group));
}

TractSurface surface(std::map<std::string, double> entries) {
    TractSurface s;
    s.year = 2018;
    s.entries = std::move(entries);
    return s;
}

TEST(HWWeights, ValidatesFractions) {
    const HWWeights d;
    EXPECT_EQ(d.home_fraction(), 0.794);
    EXPECT_EQ(d.work_fraction(), 0.206);
    EXPECT_EQ(1.0 - 0.206, 0.794);
    EXPECT_THROW(HWWeights(0.5, 0.6), DomainError);
    EXPECT_THROW(HWWeights(1.0, 0.0), DomainError);
    EXPECT_NO_THROW(HWWeights(0.75, 0.25));
}

TEST(HwBlend, Examples) {
    EXPECT_NEAR(hw_blend(10, 20), 12.06, 1e-12);
    EXPECT_EQ(hw_blend(7.8, 7.8), 7.8);
    EXPECT_NEAR(hw_blend(0, 1), 0.206, 1e-15);
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(0, 1000);
    for (int i = 0; i < 10000; ++i) {
        const double h = u(rng);
        ASSERT_EQ(hw_blend(h, h), h);
    }
}

TEST(WeightedMean, Examples) {
    EXPECT_DOUBLE_EQ(population_weighted_mean({{"a", 8}, {"b", 10}}, {{"a", 5}, {"b", 5}}).mean, 9.0);
    EXPECT_DOUBLE_EQ(population_weighted_mean({{"a", 8}, {"b", 12}}, {{"a", 1}, {"b", 3}}).mean, 11.0);
    EXPECT_THROW(population_weighted_mean({{"a", 8}}, {{"a", 0}}), EmptyPopulationError);
}

TEST(WeightedMean, DropsTractsWithoutConcentration) {
    const auto m = population_weighted_mean({{"a", 8}}, {{"a", 2}, {"z", 7}});
    EXPECT_DOUBLE_EQ(m.mean, 8.0);
    EXPECT_DOUBLE_EQ(m.dropped_weight, 7.0);
    ASSERT_EQ(m.dropped.size(), 1u);
    EXPECT_EQ(m.dropped[0], "z");
    EXPECT_THROW(population_weighted_mean({{"a", 8}}, {{"z", 7}}), EmptyPopulationError);
}

TEST(WeightedMean, MatchesExpansionAndStaysInRange) {
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> conc(4, 16);
    std::uniform_int_distribution<std::int64_t> count(0, 30);
    std::map<std::string, double> values;
    std::map<std::string, double> weights;
    std::vector<double> vs;
    std::vector<std::int64_t> ws;
    for (int i = 0; i < 1000; ++i) {
        const std::string g = fmt::format("{:011d}", i);
        values[g] = conc(rng);
        weights[g] = static_cast<double>(count(rng));
    }
    for (const auto& [g, v] : values) {
        vs.push_back(v);
        ws.push_back(static_cast<std::int64_t>(weights[g]));
    }
    const double m = population_weighted_mean(values, weights).mean;
    const double oracle = testing::expanded_mean(testing::expand(vs, ws));
    EXPECT_NEAR(m, oracle, 1e-12 * oracle);
    EXPECT_GE(m, 4.0);
    EXPECT_LE(m, 16.0);
}

TEST(WeightedPercentile, Examples) {
    const std::vector<double> v{1, 2, 3};
    const std::vector<double> w{1, 1, 1};
    EXPECT_EQ(weighted_percentile(v, w, 0.5), 2.0);
    const std::vector<double> v2{10, 5};
    const std::vector<double> w2{9, 1};
    EXPECT_EQ(weighted_percentile(v2, w2, 0.10), 5.0);
    EXPECT_EQ(weighted_percentile(v2, w2, 0.0), 5.0);
    EXPECT_EQ(weighted_percentile(v2, w2, 1.0), 10.0);
    EXPECT_THROW(weighted_percentile(std::vector<double>{}, std::vector<double>{}, 0.5),
                 EmptyPopulationError);
    EXPECT_THROW(weighted_percentile(v, w, 1.5), ContractError);
}

TEST(WeightedPercentile, MatchesExpansionAndIsScaleInvariant) {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 50; ++trial) {
        std::uniform_int_distribution<int> size(1, 40);
        std::uniform_int_distribution<int> level(0, 25);
        std::uniform_int_distribution<std::int64_t> count(0, 12);
        const int n = size(rng);
        std::vector<double> vs;
        std::vector<std::int64_t> ws;
        std::vector<double> wd;
        for (int i = 0; i < n; ++i) {
            vs.push_back(5.0 + 0.5 * level(rng));
            ws.push_back(count(rng));
            wd.push_back(static_cast<double>(ws.back()));
        }
        if (std::accumulate(ws.begin(), ws.end(), std::int64_t{0}) == 0) {
            ws[0] = 1;
            wd[0] = 1;
        }
        const auto expanded = testing::expand(vs, ws);
        for (const int k : {1, 10, 25, 50, 90, 99}) {
            const double got = weighted_percentile(vs, wd, k / 100.0);
            EXPECT_EQ(got, testing::expanded_percentile(expanded, k)) << "k=" << k;
            std::vector<double> scaled(wd);
            for (auto& x : scaled) {
                x *= 7.0;
            }
            EXPECT_EQ(weighted_percentile(vs, scaled, k / 100.0), got);
        }
        EXPECT_LE(weighted_percentile(vs, wd, 0.1), weighted_percentile(vs, wd, 0.9));
    }
}

TEST(GroupExposures, PointMassAndGroups) {
    WorkerTable t;
    t.role = TableRole::residence;
    t.year = 2018;
    t.columns = {"CS01", "CS02"};
    t.rows["17031000100"] = {4, {4, 0}};
    const auto g = compute_group_exposures(surface({{"17031000100", 9.5}}), t, kSex, Stratum::all);
    const auto& all = find(g.records, "all", Locus::H);
    EXPECT_EQ(all.mean, 9.5);
    EXPECT_EQ(all.p10, 9.5);
    EXPECT_EQ(all.p90, 9.5);
    EXPECT_EQ(all.total_weight, 4.0);
    EXPECT_EQ(g.records.size(), 2u);
    ASSERT_EQ(g.omitted_groups.size(), 1u);
    EXPECT_EQ(g.omitted_groups[0], "sex:female");
}

TEST(GroupExposures, WorkplaceLocusAndStrata) {
    WorkerTable t;
    t.role = TableRole::workplace;
    t.year = 2018;
    t.columns = {"CS01", "CS02"};
    t.rows["17031000100"] = {4, {1, 3}};
    t.rows["17031000200"] = {6, {6, 0}};
    t.rows["17031000300"] = {5, {2, 3}};
    UrbanMask mask;
    mask.classification = {{"17031000100", Stratum::urban},
                           {"17031000200", Stratum::rural},
                           {"17031000300", Stratum::rural}};
    const auto s = surface({{"17031000100", 8}, {"17031000200", 12}});
    const auto all = compute_group_exposures(s, t, kSex, Stratum::all, &mask);
    EXPECT_DOUBLE_EQ(find(all.records, "all", Locus::W).mean, (4 * 8.0 + 6 * 12.0) / 10);
    EXPECT_DOUBLE_EQ(find(all.records, "sex:female", Locus::W).mean, 8.0);
    EXPECT_DOUBLE_EQ(all.dropped_weight, 5.0);
    const auto urban = compute_group_exposures(s, t, kSex, Stratum::urban, &mask);
    EXPECT_DOUBLE_EQ(find(urban.records, "sex:male", Locus::W).mean, 8.0);
    EXPECT_DOUBLE_EQ(find(urban.records, "all", Locus::W).total_weight, 4.0);
    EXPECT_THROW(compute_group_exposures(s, t, kSex, Stratum::urban, nullptr), ContractError);
}

TEST(GroupExposures, ScalingWeightsChangesNothing) {
    WorkerTable a;
    a.year = 2018;
    a.columns = {"CS01", "CS02"};
    a.rows["17031000100"] = {3, {1, 2}};
    a.rows["17031000200"] = {5, {4, 1}};
    WorkerTable b = a;
    for (auto& [g, tc] : b.rows) {
        tc.total *= 1000;
        for (auto& c : tc.counts) {
            c *= 1000;
        }
    }
    const auto s = surface({{"17031000100", 7.3}, {"17031000200", 11.1}});
    const auto ra = compute_group_exposures(s, a, kSex, Stratum::all).records;
    const auto rb = compute_group_exposures(s, b, kSex, Stratum::all).records;
    ASSERT_EQ(ra.size(), rb.size());
    for (std::size_t i = 0; i < ra.size(); ++i) {
        EXPECT_NEAR(ra[i].mean, rb[i].mean, 1e-12 * ra[i].mean);
        EXPECT_EQ(ra[i].p10, rb[i].p10);
        EXPECT_EQ(ra[i].p90, rb[i].p90);
    }
}

TEST(HWExposures, OnePairArithmetic) {
    ODMatrix od;
    od.year = 2018;
    od.columns = {"SA01", "SA02"};
    od.entries = {{"17031000100", "17031000200", 1, {1, 0}}};
    const auto r = compute_hw_exposures(surface({{"17031000100", 10}, {"17031000200", 20}}), od,
                                        kOdAge, Stratum::all);
    EXPECT_DOUBLE_EQ(find(r.records, "od_all", Locus::H).mean, 10.0);
    EXPECT_DOUBLE_EQ(find(r.records, "od_all", Locus::W).mean, 20.0);
    EXPECT_NEAR(find(r.records, "od_all", Locus::HW).mean, 12.06, 1e-12);
    ASSERT_FALSE(r.errors.empty());
    EXPECT_EQ(r.errors[0].group, "od_all");
    EXPECT_NEAR(r.errors[0].error, -2.06, 1e-12);
    EXPECT_NEAR(r.errors[0].percent_error, -20.6, 1e-10);
}

TEST(HWExposures, DegenerateCommuteHasNoError) {
    ODMatrix od;
    od.year = 2018;
    od.columns = {"SA01", "SA02"};
    od.entries = {{"17031000100", "17031000100", 3, {1, 2}},
                  {"17031000200", "17031000200", 5, {5, 0}}};
    const auto r = compute_hw_exposures(surface({{"17031000100", 9}, {"17031000200", 13}}), od,
                                        kOdAge, Stratum::all);
    for (const auto& e : r.errors) {
        EXPECT_EQ(e.error, 0.0) << e.group;
    }
    EXPECT_DOUBLE_EQ(find(r.records, "od_all", Locus::HW).mean,
                     find(r.records, "od_all", Locus::H).mean);
}

TEST(HWExposures, ErrorIdentityAndDroppedPairs) {
    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> conc(5, 15);
    std::uniform_int_distribution<std::int64_t> count(0, 20);
    std::map<std::string, double> entries;
    for (int i = 0; i < 30; ++i) {
        entries[fmt::format("170310{:05d}", i)] = conc(rng);
    }
    ODMatrix od;
    od.year = 2018;
    od.columns = {"SA01", "SA02"};
    for (int h = 0; h < 31; ++h) {
        for (int w = 0; w < 31; w += 3) {
            ODEntry e{fmt::format("170310{:05d}", h), fmt::format("170310{:05d}", w), 0,
                      {count(rng), count(rng)}};
            e.total = e.counts[0] + e.counts[1];
            od.entries.push_back(e);
        }
    }
    const auto r = compute_hw_exposures(surface(entries), od, kOdAge, Stratum::all);
    EXPECT_GT(r.dropped_pairs, 0u);
    EXPECT_GT(r.dropped_weight, 0.0);
    for (const auto& e : r.errors) {
        const double h = find(r.records, e.group, Locus::H).mean;
        const double w = find(r.records, e.group, Locus::W).mean;
        EXPECT_NEAR(e.error, 0.206 * (h - w), 1e-9) << e.group;
        EXPECT_NEAR(e.percent_error, 100.0 * e.error / h, 1e-9);
    }
}

TEST(HWExposures, EmptyOdThrows) {
    ODMatrix od;
    od.year = 2018;
    od.columns = {"SA01", "SA02"};
    EXPECT_THROW(compute_hw_exposures(surface({{"17031000100", 9}}), od, kOdAge, Stratum::all),
                 EmptyPopulationError);
}

TEST(HWExposures, StratumFollowsHomeTract) {
    ODMatrix od;
    od.year = 2018;
    od.columns = {"SA01", "SA02"};
    od.entries = {{"17031000100", "17031000200", 2, {2, 0}},
                  {"17031000200", "17031000100", 3, {0, 3}}};
    UrbanMask mask;
    mask.classification = {{"17031000100", Stratum::urban}, {"17031000200", Stratum::rural}};
    const auto r = compute_hw_exposures(surface({{"17031000100", 10}, {"17031000200", 20}}), od,
                                        kOdAge, Stratum::urban, &mask);
    const auto& h = find(r.records, "od_all", Locus::H);
    EXPECT_EQ(h.total_weight, 2.0);
    EXPECT_EQ(h.mean, 10.0);
    EXPECT_EQ(find(r.records, "od_all", Locus::W).mean, 20.0);
}

}  // namespace
}  // namespace mobex
