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
#include "mobex/lodes.h"

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace mobex {

enum class Stage { ingest, surface, exposure, disparity, bias };

std::string_view to_string(Stage s);
Stage parse_stage(std::string_view name);  // ConfigError on unknown names

/// Parsed run configuration. Path fields hold templates in which "{year}" is
/// replaced per year; relative paths resolve against `base_dir`.
struct RunConfig {
    std::filesystem::path base_dir;
    std::vector<int> years;
    std::string grid;
    std::string geometry;
    std::optional<std::string> urban_mask;
    std::vector<std::string> rac;
    std::vector<std::string> wac;
    std::vector<std::string> od;
    HWWeights hw_weights;
    std::vector<std::size_t> bins{100, 10};
    std::vector<double> epsilons{0.25, 0.5, 0.75, 1.0, 1.25, 1.5, 1.75, 2.0};
    std::vector<double> thresholds{12.0, 10.0, 5.0};
    bool strata = false;
    std::vector<Stage> stages;
    std::filesystem::path output_dir;
    unsigned threads = 1;
    std::vector<GroupSchema> area_schemas = lodes_area_schemas();
    std::vector<GroupSchema> od_schemas = lodes_od_schemas();
    std::string canonical;  // normalized JSON text, used for the config hash

    std::filesystem::path resolve(const std::string& tmpl, int year) const;
    std::vector<std::filesystem::path> resolve_all(const std::vector<std::string>& tmpls,
                                                   int year) const;
    bool has_stage(Stage s) const;
};

/// Parses JSON configuration text. Throws ConfigError on schema problems.
RunConfig parse_config(std::string_view text, const std::filesystem::path& base_dir);

RunConfig load_config(const std::filesystem::path& path);

/// Throws ConfigError naming the first referenced input that does not exist.
void check_inputs_exist(const RunConfig& config);

/// Every input path the run reads, in a fixed order.
std::vector<std::filesystem::path> input_paths(const RunConfig& config);

}  // namespace mobex
