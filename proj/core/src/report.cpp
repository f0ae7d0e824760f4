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

#include "mobex/report.h"

#include "mobex/text_io.h"

#include <fmt/format.h>

namespace mobex {

namespace {

std::string num(double v) { return format_double(v); }

template <typename Row, typename F>
std::string render(std::string_view header, std::span<const Row> rows, F&& line) {
    std::string out(header);
    out += '\n';
    for (const auto& r : rows) {
        out += line(r);
        out += '\n';
    }
    return out;
}

}  // namespace

std::string_view to_string(Statistic s) {
    switch (s) {
        case Statistic::mean: return "mean";
        case Statistic::p10: return "p10";
        case Statistic::p90: return "p90";
    }
    return "mean";
}

std::string exposure_csv(std::span<const ExposureRecord> rows) {
    return render("year,group,locus,stratum,mean,p10,p90,weight", rows, [](const auto& r) {
        return fmt::format("{},{},{},{},{},{},{},{}", r.year, r.group, to_string(r.locus),
                           to_string(r.stratum), num(r.mean), num(r.p10), num(r.p90),
                           num(r.total_weight));
    });
}

std::string error_csv(std::span<const ErrorRecord> rows) {
    return render("year,group,stratum,error,percent_error", rows, [](const auto& r) {
        return fmt::format("{},{},{},{},{}", r.year, r.group, to_string(r.stratum), num(r.error),
                           num(r.percent_error));
    });
}

std::string gaps_csv(std::span<const GapRow> rows) {
    return render(
        "year,characteristic,locus,stratum,statistic,most_exposed,least_exposed,most_value,"
        "least_value,absolute_diff,percent_diff,ratio",
        rows, [](const auto& r) {
            const auto& g = r.gap;
            return fmt::format("{},{},{},{},{},{},{},{},{},{},{},{}", r.year, g.characteristic,
                               to_string(r.locus), to_string(r.stratum), to_string(r.statistic),
                               g.most_exposed, g.least_exposed, num(g.most_value),
                               num(g.least_value), num(g.absolute_diff), num(g.percent_diff),
                               num(g.ratio));
        });
}

std::string bins_csv(std::span<const BinRow> rows) {
    return render("year,group,locus,stratum,n_bins,bin,n_tracts,pm25", rows, [](const auto& r) {
        return fmt::format("{},{},{},{},{},{},{},{}", r.year, r.group, to_string(r.locus),
                           to_string(r.stratum), r.n_bins, r.bin.index, r.bin.n_tracts,
                           num(r.bin.pm25));
    });
}

std::string contrast_csv(std::span<const ContrastRow> rows) {
    return render("year,group,locus,stratum,measure,value", rows, [](const auto& r) {
        return fmt::format("{},{},{},{},{},{}", r.year, r.group, to_string(r.locus),
                           to_string(r.stratum), r.measure, num(r.value));
    });
}

std::string decile_shares_csv(std::span<const DecileShareRow> rows) {
    return render("year,group,locus,stratum,decile,mean_fraction", rows, [](const auto& r) {
        return fmt::format("{},{},{},{},{},{}", r.year, r.group, to_string(r.locus),
                           to_string(r.stratum), r.decile, num(r.mean_fraction));
    });
}

std::string atkinson_csv(std::span<const AtkinsonRow> rows) {
    return render("year,characteristic,locus,stratum,epsilon,atkinson", rows, [](const auto& r) {
        return fmt::format("{},{},{},{},{},{}", r.year, r.characteristic, to_string(r.locus),
                           to_string(r.stratum), num(r.epsilon), num(r.index));
    });
}

std::string state_disparity_csv(std::span<const StateDisparityRow> rows) {
    return render("year,state,group,locus,value", rows, [](const auto& r) {
        return fmt::format("{},{},{},{},{}", r.year, r.state, r.group, to_string(r.locus),
                           num(r.value));
    });
}

std::string threshold_csv(std::span<const ThresholdRow> rows) {
    return render("year,group,locus,stratum,threshold,q", rows, [](const auto& r) {
        return fmt::format("{},{},{},{},{},{}", r.year, r.group, to_string(r.locus),
                           to_string(r.stratum), num(r.threshold), num(r.q));
    });
}

std::string threshold_cov_csv(std::span<const ThresholdCovRow> rows) {
    return render("year,characteristic,locus,stratum,threshold,cov", rows, [](const auto& r) {
        return fmt::format("{},{},{},{},{},{}", r.year, r.characteristic, to_string(r.locus),
                           to_string(r.stratum), num(r.threshold), num(r.cov));
    });
}

std::string bias_csv(std::span<const BiasRow> rows) {
    return render("year,group,stratum,sigma2,phi,omega2,bias", rows, [](const auto& r) {
        return fmt::format("{},{},{},{},{},{},{}", r.year, r.group, to_string(r.stratum),
                           num(r.moments.sigma2), num(r.moments.phi), num(r.moments.omega2),
                           num(r.bias));
    });
}

std::string wilcoxon_csv(std::span<const WilcoxonRow> rows) {
    return render("year,group,stratum,n_h,n_hw,u,z,p", rows, [](const auto& r) {
        const auto& w = r.result;
        return fmt::format("{},{},{},{},{},{},{},{}", r.year, r.group, to_string(r.stratum),
                           num(w.n_a), num(w.n_b), num(w.u), num(w.z), num(w.p));
    });
}

}  // namespace mobex
