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

#include "mobex/bias.h"
#include "mobex/disparity.h"
#include "mobex/exposure.h"

#include <span>
#include <string>
#include <vector>

namespace mobex {

/// Which per-group statistic a gap row compares.
enum class Statistic { mean, p10, p90 };

std::string_view to_string(Statistic s);

struct GapRow {
    int year = 0;
    Locus locus = Locus::H;
    Stratum stratum = Stratum::all;
    Statistic statistic = Statistic::mean;
    GapResult gap;
};

struct BinRow {
    int year = 0;
    std::string group;
    Locus locus = Locus::H;
    Stratum stratum = Stratum::all;
    std::size_t n_bins = 0;
    Bin bin;
};

struct ContrastRow {
    int year = 0;
    std::string group;
    Locus locus = Locus::H;
    Stratum stratum = Stratum::all;
    std::string measure;  // pm25_by_fraction or fraction_by_pm25
    double value = 0.0;
};

struct DecileShareRow {
    int year = 0;
    std::string group;
    Locus locus = Locus::H;
    Stratum stratum = Stratum::all;
    std::size_t decile = 0;
    double mean_fraction = 0.0;
};

struct AtkinsonRow {
    int year = 0;
    std::string characteristic;
    Locus locus = Locus::H;
    Stratum stratum = Stratum::all;
    double epsilon = 0.0;
    double index = 0.0;
};

struct StateDisparityRow {
    int year = 0;
    std::string state;
    std::string group;
    Locus locus = Locus::H;
    double value = 0.0;
};

struct ThresholdRow {
    int year = 0;
    std::string group;
    Locus locus = Locus::H;
    Stratum stratum = Stratum::all;
    double threshold = 0.0;
    double q = 0.0;
};

struct ThresholdCovRow {
    int year = 0;
    std::string characteristic;
    Locus locus = Locus::H;
    Stratum stratum = Stratum::all;
    double threshold = 0.0;
    double cov = 0.0;  // NaN when every group share is zero
};

struct BiasRow {
    int year = 0;
    std::string group;
    Stratum stratum = Stratum::all;
    ErrorMoments moments;
    double bias = 0.0;
};

struct WilcoxonRow {
    int year = 0;
    std::string group;
    Stratum stratum = Stratum::all;
    RankSumResult result;  // H (first sample) against HW
};

std::string exposure_csv(std::span<const ExposureRecord> rows);
std::string error_csv(std::span<const ErrorRecord> rows);
std::string gaps_csv(std::span<const GapRow> rows);
std::string bins_csv(std::span<const BinRow> rows);
std::string contrast_csv(std::span<const ContrastRow> rows);
std::string decile_shares_csv(std::span<const DecileShareRow> rows);
std::string atkinson_csv(std::span<const AtkinsonRow> rows);
std::string state_disparity_csv(std::span<const StateDisparityRow> rows);
std::string threshold_csv(std::span<const ThresholdRow> rows);
std::string threshold_cov_csv(std::span<const ThresholdCovRow> rows);
std::string bias_csv(std::span<const BiasRow> rows);
std::string wilcoxon_csv(std::span<const WilcoxonRow> rows);

}  // namespace mobex
