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
#include "mobex/error.h"

#include "oracles.h"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

namespace mobex {
namespace {

// E = Z - X, so Z = X + E.
ErrorPair pair(double x, double e, double w = 1.0) {
    return {x + e, x, w};
}

TEST(ErrorMoments, Examples) {
    const std::vector<ErrorPair> two{pair(1, 0), pair(3, 2)};
    const auto m = error_moments(two);
    EXPECT_DOUBLE_EQ(m.sigma2, 1.0);
    EXPECT_DOUBLE_EQ(m.phi, 1.0);
    EXPECT_DOUBLE_EQ(m.omega2, 1.0);
    EXPECT_DOUBLE_EQ(m.total_weight, 2.0);

    const std::vector<ErrorPair> exact{pair(1, 0), pair(2, 0), pair(5, 0)};
    const auto z = error_moments(exact);
    EXPECT_EQ(z.phi, 0.0);
    EXPECT_EQ(z.omega2, 0.0);
    EXPECT_DOUBLE_EQ(bias_factor(z), 1.0);
}

TEST(ErrorMoments, Errors) {
    EXPECT_THROW(error_moments(std::vector<ErrorPair>{pair(2, 0), pair(2, 1)}), DegenerateVarianceError);
    EXPECT_THROW(error_moments(std::vector<ErrorPair>{pair(2, 0, 0), pair(3, 1, 0)}), Error);
    EXPECT_THROW(error_moments(std::vector<ErrorPair>{}), Error);
}

TEST(ErrorMoments, MatchExpansionOracle) {
    std::mt19937_64 rng(41);
    std::uniform_real_distribution<double> u(5, 15);
    std::uniform_int_distribution<std::int64_t> count(0, 25);
    std::vector<ErrorPair> pairs;
    std::vector<double> xs;
    std::vector<double> es;
    for (int i = 0; i < 300; ++i) {
        const double x = u(rng);
        const double e = 0.3 * (x - 10) + 0.2 * u(rng) - 2;
        const auto w = count(rng);
        pairs.push_back(pair(x, e, static_cast<double>(w)));
        for (std::int64_t k = 0; k < w; ++k) {
            xs.push_back(x);
            es.push_back(pairs.back().z - x);
        }
    }
    long double mx = 0;
    long double me = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        mx += xs[i];
        me += es[i];
    }
    mx /= xs.size();
    me /= xs.size();
    long double sxx = 0;
    long double sxe = 0;
    long double see = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxe += (xs[i] - mx) * (es[i] - me);
        see += (es[i] - me) * (es[i] - me);
    }
    const auto n = static_cast<long double>(xs.size());
    const auto m = error_moments(pairs);
    EXPECT_NEAR(m.sigma2, static_cast<double>(sxx / n), 1e-10 * m.sigma2);
    EXPECT_NEAR(m.phi, static_cast<double>(sxe / n), 1e-10 * std::abs(m.phi));
    EXPECT_NEAR(m.omega2, static_cast<double>(see / n), 1e-10 * m.omega2);
    EXPECT_LE(m.phi * m.phi, m.sigma2 * m.omega2 * (1 + 1e-9));
}

TEST(ErrorMoments, FromPairExposures) {
    std::vector<PairExposure> ps(2);
    ps[0].h = 1;
    ps[0].hw = 1;
    ps[0].weight = 1;
    ps[1].h = 5;
    ps[1].hw = 3;
    ps[1].weight = 1;
    const auto m = error_moments(ps);
    EXPECT_DOUBLE_EQ(m.sigma2, 1.0);
    EXPECT_DOUBLE_EQ(m.phi, 1.0);
    EXPECT_DOUBLE_EQ(m.omega2, 1.0);
}

TEST(BiasFactor, Examples) {
    EXPECT_DOUBLE_EQ(bias_factor({4, 0, 1, 1}), 0.8);
    EXPECT_DOUBLE_EQ(bias_factor({4, 0, 0, 1}), 1.0);
    EXPECT_DOUBLE_EQ(bias_factor({1, 1, 1, 2}), 2.0 / 4.0);
    EXPECT_THROW(bias_factor({1, -1, 1, 1}), DomainError);
    double prev = 1.0;
    for (int k = 0; k <= 10; ++k) {
        const double b = bias_factor({2.0, 0.0, 0.5 * k, 1});
        EXPECT_GT(b, 0.0);
        EXPECT_LE(b, prev);
        prev = b;
    }
}

TEST(BiasFactor, ShiftInvariant) {
    std::mt19937_64 rng(5);
    std::normal_distribution<double> n(0, 1);
    std::vector<ErrorPair> a;
    std::vector<ErrorPair> b;
    for (int i = 0; i < 200; ++i) {
        const double x = 10 + n(rng);
        const double e = 0.2 * n(rng) - 0.1 * x;
        a.push_back(pair(x, e));
        b.push_back(pair(x + 50, e));
    }
    EXPECT_NEAR(bias_factor(error_moments(a)), bias_factor(error_moments(b)), 1e-9);
}

TEST(BiasFactor, MatchesSimulatedRegression) {
    std::mt19937_64 rng(77);
    std::normal_distribution<double> n(0, 1);
    const int count = 50000;
    std::vector<ErrorPair> pairs;
    double sx = 0;
    double sz = 0;
    double sy = 0;
    std::vector<double> ys;
    for (int i = 0; i < count; ++i) {
        const double x = 10 + 2 * n(rng);
        const double e = -0.3 * (x - 10) + 0.8 * n(rng);
        const double y = 1.5 * x + n(rng);
        pairs.push_back(pair(x, e));
        ys.push_back(y);
        sx += x;
        sz += x + e;
        sy += y;
    }
    sx /= count;
    sz /= count;
    sy /= count;
    double cxy = 0;
    double cxx = 0;
    double czy = 0;
    double czz = 0;
    for (int i = 0; i < count; ++i) {
        const double dx = pairs[i].x - sx;
        const double dz = pairs[i].z - sz;
        const double dy = ys[i] - sy;
        cxy += dx * dy;
        cxx += dx * dx;
        czy += dz * dy;
        czz += dz * dz;
    }
    const double ratio = (czy / czz) / (cxy / cxx);
    const double b = bias_factor(error_moments(pairs));
    EXPECT_NEAR(ratio, b, 0.02 * b);
}

TEST(Wilcoxon, IdenticalSamples) {
    const std::vector<double> a{1, 2, 3, 4};
    const auto r = wilcoxon_rank_sum(a, a);
    EXPECT_EQ(r.z, 0.0);
    EXPECT_EQ(r.p, 1.0);
    EXPECT_EQ(r.u, 8.0);
}

TEST(Wilcoxon, SeparatedSamples) {
    const std::vector<double> a{1, 2, 3};
    const std::vector<double> b{4, 5, 6};
    const auto r = wilcoxon_rank_sum(a, b);
    EXPECT_EQ(r.u, 0.0);
    EXPECT_LT(r.z, 0.0);
    EXPECT_DOUBLE_EQ(testing::exact_rank_sum_p(a, b), 0.1);
    EXPECT_LT(std::abs(r.p - 0.1), 0.05);
}

TEST(Wilcoxon, USymmetryAndDirectCount) {
    std::mt19937_64 rng(9);
    std::uniform_int_distribution<int> v(0, 12);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<double> a(1 + trial % 7);
        std::vector<double> b(1 + trial % 5);
        for (auto& x : a) {
            x = v(rng);
        }
        for (auto& x : b) {
            x = v(rng);
        }
        const auto ab = wilcoxon_rank_sum(a, b);
        const auto ba = wilcoxon_rank_sum(b, a);
        EXPECT_EQ(ab.u + ba.u, static_cast<double>(a.size() * b.size()));
        EXPECT_EQ(ab.u, testing::direct_u(a, b));
        EXPECT_GT(ab.p, 0.0);
        EXPECT_LE(ab.p, 1.0);
        EXPECT_EQ(ab.p, ba.p);
    }
}

TEST(Wilcoxon, WeightsActAsFrequencies) {
    const std::vector<double> a{1, 4};
    const std::vector<double> wa{2, 1};
    const std::vector<double> b{2, 3};
    const std::vector<double> wb{1, 3};
    const auto weighted = wilcoxon_rank_sum(a, wa, b, wb);
    const auto expanded = wilcoxon_rank_sum(std::vector<double>{1, 1, 4}, std::vector<double>{2, 3, 3, 3});
    EXPECT_DOUBLE_EQ(weighted.u, expanded.u);
    EXPECT_DOUBLE_EQ(weighted.z, expanded.z);
    EXPECT_DOUBLE_EQ(weighted.p, expanded.p);
}

TEST(Wilcoxon, Errors) {
    const std::vector<double> a{1, 2};
    EXPECT_THROW(wilcoxon_rank_sum(a, std::vector<double>{}), ContractError);
    EXPECT_THROW(wilcoxon_rank_sum(std::vector<double>{}, std::vector<double>{}), ContractError);
    EXPECT_THROW(wilcoxon_rank_sum(a, std::vector<double>{1}, a, a), ContractError);
    EXPECT_THROW(wilcoxon_rank_sum(a, std::vector<double>{1, -1}, a, a), ContractError);
    EXPECT_THROW(wilcoxon_rank_sum(a, std::vector<double>{std::nan("")}), ContractError);
}

}  // namespace
}  // namespace mobex
