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

#include "mobex/config.h"

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace mobex {

struct StageReport {
    Stage stage = Stage::ingest;
    std::map<std::string, std::size_t> rows;  // row counts by table or output
    double dropped_weight = 0.0;
    std::vector<std::string> excluded_tracts;
    std::vector<std::string> notes;
    double seconds = 0.0;
};

struct RunManifest {
    std::string config_hash;
    std::vector<std::pair<std::string, std::string>> inputs;  // path, checksum
    std::vector<StageReport> stages;
    double dropped_weight_total = 0.0;

    std::string to_json() const;
};

struct RunOptions {
    std::optional<std::filesystem::path> output_dir;  // overrides the config
    std::optional<unsigned> threads;                  // overrides the config
    std::vector<Stage> stages;                        // overrides the config when non-empty
    bool write_outputs = true;                        // false: compute and validate only
};

/// Runs the configured stages in order. Prerequisite stages are computed in
/// memory; only the selected stages write their report files. Any failure
/// is rethrown as StageError naming the stage.
RunManifest run(const RunConfig& config, const RunOptions& options = {});

}  // namespace mobex
