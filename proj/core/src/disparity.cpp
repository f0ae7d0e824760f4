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

#include "mobex/disparity.h"

#include "mobex/error.h"
#include "mobex/numeric.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>

namespace mobex {

namespace {

// Sizes of n_bins contiguous bins over n items; the first n % n_bins are one larger.
std::vector<std::size_t> bin_sizes(std::size_t n, std::size_t n_bins) {
    std::vector<std::size_t> sizes(n_bins, n / n_bins);
    for (std::size_t i = 0; i < n % n_bins; ++i) {
        ++sizes[i];
    }
    return sizes;
}

}  // namespace

GapResult extreme_group_gap(std::string characteristic, std::span<const GroupValue> groups,
                            double national) {
    if (groups.size() < 2) {
        throw InsufficientGroupsError(fmt::format(
            "characteristic {} has {} group(s); at least two are needed", characteristic,
            groups.size()));
    }
    if (!(national > 0.0)) {
        throw DomainError(fmt::format("national value must be positive (got {})", national));
    }
    const GroupValue* most = &groups[0];
    const GroupValue* least = &groups[0];
    for (const auto& g : groups.subspan(1)) {
        if (g.value > most->value || (g.value == most->value && g.group < most->group)) {
            most = &g;
        }
        if (g.value < least->value || (g.value == least->value && g.group < least->group)) {
            least = &g;
        }
    }
    GapResult r;
    r.characteristic = std::move(characteristic);
    r.most_exposed = most->group;
    r.least_exposed = least->group;
    r.most_value = most->value;
    r.least_value = least->value;
    r.absolute_diff = most->value - least->value;
    r.percent_diff = 100.0 * r.absolute_diff / national;
    r.ratio = least->value > 0.0 ? most->value / least->value
                                 : std::numeric_limits<double>::infinity();
    return r;
}

PercentileBinCurve percentile_bin_curve(std::vector<BinTract> tracts, std::size_t n_bins) {
    if (n_bins < 2) {
        throw ContractError(fmt::format("bin count must be at least 2 (got {})", n_bins));
    }
    if (tracts.size() < n_bins) {
        throw InsufficientTractsError(
            fmt::format("{} tract(s) cannot fill {} bins", tracts.size(), n_bins));
    }
    std::sort(tracts.begin(), tracts.end(), [](const BinTract& a, const BinTract& b) {
        return a.fraction != b.fraction ? a.fraction < b.fraction : a.geoid < b.geoid;
    });
    PercentileBinCurve curve;
    curve.bins.reserve(n_bins);
    std::vector<double> num;
    std::vector<double> den;
    std::size_t pos = 0;
    const auto sizes = bin_sizes(tracts.size(), n_bins);
    for (std::size_t g = 0; g < n_bins; ++g) {
        num.clear();
        den.clear();
        // Deviations from the first populated tract keep a uniform bin exact.
        double reference = 0.0;
        for (std::size_t j = pos; j < pos + sizes[g]; ++j) {
            if (tracts[j].count > 0.0) {
                reference = tracts[j].concentration;
                break;
            }
        }
        for (std::size_t j = pos; j < pos + sizes[g]; ++j) {
            num.push_back((tracts[j].concentration - reference) * tracts[j].count);
            den.push_back(tracts[j].count);
        }
        pos += sizes[g];
        const double d = pairwise_sum(den);
        const double value = d > 0.0 ? reference + pairwise_sum(num) / d
                                     : std::numeric_limits<double>::quiet_NaN();
        curve.bins.push_back({g + 1, sizes[g], value});
    }
    return curve;
}

double decile_contrast(const PercentileBinCurve& curve) {
    if (curve.bins.size() != 10) {
        throw ContractError(
            fmt::format("decile contrast needs 10 bins (got {})", curve.bins.size()));
    }
    const double top = curve.bins.back().pm25;
    const double bottom = curve.bins.front().pm25;
    if (std::isnan(top) || std::isnan(bottom)) {
        throw ContractError("decile contrast on an empty end bin");
    }
    return top - bottom;
}

DecileShares population_share_by_concentration_decile(std::vector<ShareTract> tracts) {
    constexpr std::size_t kBins = 10;
    if (tracts.size() < kBins) {
        throw InsufficientTractsError(
            fmt::format("{} tract(s) cannot fill {} bins", tracts.size(), kBins));
    }
    for (const auto& t : tracts) {
        if (!(t.total > 0.0)) {
            throw ContractError(fmt::format("tract {} has no workers", t.geoid));
        }
    }
    std::sort(tracts.begin(), tracts.end(), [](const ShareTract& a, const ShareTract& b) {
        return a.concentration != b.concentration ? a.concentration < b.concentration
                                                  : a.geoid < b.geoid;
    });
    DecileShares out;
    std::vector<double> fractions;
    std::size_t pos = 0;
    for (const std::size_t size : bin_sizes(tracts.size(), kBins)) {
        fractions.clear();
        for (std::size_t j = pos; j < pos + size; ++j) {
            fractions.push_back(tracts[j].count / tracts[j].total);
        }
        pos += size;
        out.mean_fraction.push_back(pairwise_sum(fractions) / static_cast<double>(size));
    }
    out.difference = out.mean_fraction.back() - out.mean_fraction.front();
    return out;
}

double atkinson(const AtkinsonInput& input) {
    const auto& f = input.shares;
    const auto& y = input.values;
    if (f.empty() || f.size() != y.size()) {
        throw ContractError("Atkinson input needs matching, non-empty shares and values");
    }
    if (!(input.epsilon >= 0.0) || !std::isfinite(input.epsilon)) {
        throw DomainError(fmt::format("inequality aversion must be >= 0 (got {})", input.epsilon));
    }
    for (std::size_t j = 0; j < f.size(); ++j) {
        if (!(y[j] > 0.0) || !std::isfinite(y[j])) {
            throw DomainError(fmt::format("Atkinson values must be positive (got {})", y[j]));
        }
        if (!(f[j] > 0.0)) {
            throw ContractError(fmt::format("Atkinson shares must be positive (got {})", f[j]));
        }
    }
    if (std::abs(pairwise_sum(f) - 1.0) > 1e-9) {
        throw ContractError("Atkinson shares must sum to 1");
    }

    // Shares are renormalized so that sum f_j (y_j / ybar - 1) vanishes exactly;
    // that first-order term is then dropped from the sums below, leaving only
    // the second-order part, which keeps near-equal inputs accurate.
    const double f_total = pairwise_sum(f);
    std::vector<double> share(f.size());
    std::vector<double> terms(f.size());
    for (std::size_t j = 0; j < f.size(); ++j) {
        share[j] = f[j] / f_total;
        terms[j] = share[j] * y[j];
    }
    const double ybar = pairwise_sum(terms);
    double log_m = 0.0;
    if (input.epsilon == 1.0) {
        for (std::size_t j = 0; j < f.size(); ++j) {
            const double d = (y[j] - ybar) / ybar;
            terms[j] = share[j] * (std::log1p(d) - d);
        }
        log_m = pairwise_sum(terms);
    } else {
        const double e = 1.0 - input.epsilon;
        for (std::size_t j = 0; j < f.size(); ++j) {
            const double d = (y[j] - ybar) / ybar;
            terms[j] = share[j] * (std::expm1(e * std::log1p(d)) - e * d);
        }
        log_m = std::log1p(pairwise_sum(terms)) / e;
    }
    const double index = -std::expm1(log_m);
    // The index is non-negative; only rounding can push it below zero.
    return std::max(index, 0.0);
}

double atkinson_of_concentrations(std::span<const ExposureRecord> records, double epsilon) {
    AtkinsonInput in;
    in.epsilon = epsilon;
    std::vector<double> w;
    for (const auto& r : records) {
        if (!(r.mean > 0.0)) {
            throw DomainError(
                fmt::format("group {} has non-positive mean concentration {}", r.group, r.mean));
        }
        w.push_back(r.total_weight);
        in.values.push_back(1.0 / r.mean);
    }
    const double total = pairwise_sum(w);
    if (!(total > 0.0)) {
        throw EmptyPopulationError("Atkinson groups have zero total weight");
    }
    for (const double x : w) {
        in.shares.push_back(x / total);
    }
    return atkinson(in);
}

double state_disparity(double group_mean, double state_mean, double national_mean) {
    if (!(national_mean > 0.0)) {
        throw DomainError(fmt::format("national mean must be positive (got {})", national_mean));
    }
    return (group_mean - state_mean) / national_mean;
}

double threshold_share(std::span<const double> values, std::span<const double> weights,
                       double threshold) {
    if (values.size() != weights.size()) {
        throw ContractError("values and weights differ in length");
    }
    std::vector<double> above;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (values[i] > threshold) {
            above.push_back(weights[i]);
        }
    }
    const double total = pairwise_sum(weights);
    if (!(total > 0.0)) {
        throw EmptyPopulationError("threshold share of an empty population");
    }
    return 100.0 * pairwise_sum(above) / total;
}

double cov_of_shares(std::span<const double> qs) {
    if (qs.size() < 2) {
        throw InsufficientGroupsError(
            fmt::format("coefficient of variation needs two groups (got {})", qs.size()));
    }
    const double n = static_cast<double>(qs.size());
    const double mean = pairwise_sum(qs) / n;
    if (!(mean > 0.0)) {
        throw DomainError("coefficient of variation of shares with zero mean");
    }
    std::vector<double> sq(qs.size());
    for (std::size_t i = 0; i < qs.size(); ++i) {
        sq[i] = (qs[i] - mean) * (qs[i] - mean);
    }
    return std::sqrt(pairwise_sum(sq) / n) / mean;
}

std::string characteristic_of(std::string_view group) {
    const auto colon = group.find(':');
    return std::string(colon == std::string_view::npos ? group : group.substr(0, colon));
}

}  // namespace mobex
