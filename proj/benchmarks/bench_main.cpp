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

#include "mobex/bias.h"
#include "mobex/exposure.h"
#include "mobex/lodes.h"
#include "mobex/zonal.h"

#include <benchmark/benchmark.h>

#include <cmath>
#include <numbers>
#include <random>
#include <string>

namespace {

using namespace mobex;

TractGeometry star_tract(std::mt19937_64& rng, double cx, double cy, double radius, int n) {
    std::uniform_real_distribution<double> r(0.5 * radius, radius);
    Ring ring;
    for (int k = 0; k < n; ++k) {
        const double a = 2.0 * std::numbers::pi * k / n;
        const double rr = r(rng);
        ring.push_back({cx + rr * std::cos(a), cy + rr * std::sin(a)});
    }
    return TractGeometry{"17031000100", {Polygon{ring, {}}}};
}

void BM_ZonalMean(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(5, 15);
    std::vector<double> values(n * n);
    for (auto& v : values) {
        v = u(rng);
    }
    const ConcentrationGrid grid(0, 0, 1, 1, n, n, values);
    const auto tract = star_tract(rng, n / 2.0, n / 2.0, n / 3.0, 24);
    for (auto _ : state) {
        benchmark::DoNotOptimize(zonal_weighted_mean(grid, tract));
    }
}
BENCHMARK(BM_ZonalMean)->Arg(50)->Arg(200);

void BM_AggregateToTracts(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    std::vector<GroupSchema> schemas{lodes_area_schemas().front()};
    BlockTable blocks;
    for (const auto& c : schemas[0].categories) {
        blocks.columns.push_back(c.code);
    }
    std::mt19937_64 rng(2);
    std::uniform_int_distribution<int> tract(0, 9999);
    std::uniform_int_distribution<std::int64_t> count(0, 30);
    for (std::size_t i = 0; i < n; ++i) {
        BlockRow r;
        r.geocode = "17031" + std::to_string(100000 + tract(rng)) + "1000";
        r.counts = {count(rng), count(rng), count(rng)};
        r.total = r.counts[0] + r.counts[1] + r.counts[2];
        blocks.rows.push_back(std::move(r));
    }
    for (auto _ : state) {
        benchmark::DoNotOptimize(aggregate_to_tracts(blocks, schemas, 2018, 1));
    }
    state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * n));
}
BENCHMARK(BM_AggregateToTracts)->Arg(100000);

void BM_WeightedPercentile(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(5, 15);
    std::vector<double> v(n);
    std::vector<double> w(n);
    for (std::size_t i = 0; i < n; ++i) {
        v[i] = u(rng);
        w[i] = std::floor(u(rng));
    }
    for (auto _ : state) {
        benchmark::DoNotOptimize(weighted_percentile(v, w, 0.9));
    }
}
BENCHMARK(BM_WeightedPercentile)->Arg(70000);

void BM_WilcoxonWeighted(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> u(5, 15);
    std::vector<double> a(n);
    std::vector<double> b(n);
    std::vector<double> w(n);
    for (std::size_t i = 0; i < n; ++i) {
        a[i] = u(rng);
        b[i] = u(rng);
        w[i] = std::floor(u(rng));
    }
    for (auto _ : state) {
        benchmark::DoNotOptimize(wilcoxon_rank_sum(a, w, b, w));
    }
}
BENCHMARK(BM_WilcoxonWeighted)->Arg(100000);

}  // namespace

BENCHMARK_MAIN();
