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
#include "mobex/numeric.h"

#include <algorithm>
#include <cfloat>
#include <cmath>

#include <fmt/format.h>

namespace mobex {

ErrorMoments error_moments(std::span<const ErrorPair> pairs) {
    const std::size_t n = pairs.size();
    std::vector<double> w(n);
    std::vector<double> a(n);
    std::vector<double> b(n);
    bool distinct = false;
    for (std::size_t i = 0; i < n; ++i) {
        if (pairs[i].weight < 0.0 || !std::isfinite(pairs[i].weight)) {
            throw ContractError("error weights must be finite and non-negative");
        }
        w[i] = pairs[i].weight;
        a[i] = pairs[i].weight * pairs[i].x;
        b[i] = pairs[i].weight * (pairs[i].z - pairs[i].x);
    }
    ErrorMoments m;
    m.total_weight = pairwise_sum(w);
    if (!(m.total_weight > 0.0)) {
        throw EmptyPopulationError("error moments of an empty population");
    }
    const double mx = pairwise_sum(a) / m.total_weight;
    const double me = pairwise_sum(b) / m.total_weight;
    std::vector<double> c(n);
    double first_x = 0.0;
    bool have_first = false;
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = pairs[i].x - mx;
        const double de = (pairs[i].z - pairs[i].x) - me;
        a[i] = w[i] * dx * dx;
        b[i] = w[i] * de * de;
        c[i] = w[i] * dx * de;
        if (w[i] > 0.0) {
            if (!have_first) {
                first_x = pairs[i].x;
                have_first = true;
            } else if (pairs[i].x != first_x) {
                distinct = true;
            }
        }
    }
    m.sigma2 = pairwise_sum(a) / m.total_weight;
    m.omega2 = pairwise_sum(b) / m.total_weight;
    m.phi = pairwise_sum(c) / m.total_weight;
    if (!distinct || !(m.sigma2 > 0.0)) {
        throw DegenerateVarianceError("reference exposure has zero variance");
    }
    return m;
}

ErrorMoments error_moments(std::span<const PairExposure> pairs) {
    std::vector<ErrorPair> ep;
    ep.reserve(pairs.size());
    for (const auto& p : pairs) {
        ep.push_back({p.h, p.hw, p.weight});
    }
    return error_moments(ep);
}

double bias_factor(const ErrorMoments& m) {
    const double den = m.sigma2 + 2.0 * m.phi + m.omega2;
    if (!(den > 0.0)) {
        throw DomainError(fmt::format("bias denominator must be positive (got {})", den));
    }
    return (m.sigma2 + m.phi) / den;
}

RankSumResult wilcoxon_rank_sum(std::span<const double> a, std::span<const double> b) {
    const std::vector<double> wa(a.size(), 1.0);
    const std::vector<double> wb(b.size(), 1.0);
    return wilcoxon_rank_sum(a, wa, b, wb);
}

RankSumResult wilcoxon_rank_sum(std::span<const double> a, std::span<const double> weights_a,
                                std::span<const double> b, std::span<const double> weights_b) {
    if (a.size() != weights_a.size() || b.size() != weights_b.size()) {
        throw ContractError("samples and weights differ in length");
    }
    struct Obs {
        double value;
        double weight;
        bool first;
    };
    std::vector<Obs> obs;
    obs.reserve(a.size() + b.size());
    std::vector<double> wa;
    std::vector<double> wb;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (weights_a[i] < 0.0 || std::isnan(a[i])) {
            throw ContractError("rank-sum inputs must be numbers with non-negative weights");
        }
        if (weights_a[i] > 0.0) {
            obs.push_back({a[i], weights_a[i], true});
            wa.push_back(weights_a[i]);
        }
    }
    for (std::size_t i = 0; i < b.size(); ++i) {
        if (weights_b[i] < 0.0 || std::isnan(b[i])) {
            throw ContractError("rank-sum inputs must be numbers with non-negative weights");
        }
        if (weights_b[i] > 0.0) {
            obs.push_back({b[i], weights_b[i], false});
            wb.push_back(weights_b[i]);
        }
    }
    RankSumResult r;
    r.n_a = pairwise_sum(wa);
    r.n_b = pairwise_sum(wb);
    if (!(r.n_a > 0.0) || !(r.n_b > 0.0)) {
        throw ContractError("rank-sum test needs two non-empty samples");
    }
    std::sort(obs.begin(), obs.end(),
              [](const Obs& x, const Obs& y) { return x.value < y.value; });

    const double n = r.n_a + r.n_b;
    std::vector<double> rank_terms;
    std::vector<double> tie_terms;
    double below = 0.0;
    for (std::size_t i = 0; i < obs.size();) {
        std::size_t j = i;
        double t = 0.0;
        double ta = 0.0;
        while (j < obs.size() && obs[j].value == obs[i].value) {
            t += obs[j].weight;
            if (obs[j].first) {
                ta += obs[j].weight;
            }
            ++j;
        }
        rank_terms.push_back(ta * (below + (t + 1.0) / 2.0));
        tie_terms.push_back(t * t * t - t);
        below += t;
        i = j;
    }
    r.u = pairwise_sum(rank_terms) - r.n_a * (r.n_a + 1.0) / 2.0;
    const double mean = r.n_a * r.n_b / 2.0;
    const double var =
        r.n_a * r.n_b / 12.0 * ((n + 1.0) - pairwise_sum(tie_terms) / (n * (n - 1.0)));
    if (!(var > 0.0)) {
        r.z = 0.0;
        r.p = 1.0;
        return r;
    }
    const double d = r.u - mean;
    const double corrected = std::copysign(std::max(std::abs(d) - 0.5, 0.0), d);
    r.z = corrected / std::sqrt(var);
    r.p = std::clamp(std::erfc(std::abs(r.z) / std::sqrt(2.0)), DBL_MIN, 1.0);
    return r;
}

}  // namespace mobex
