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

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

namespace mobex {

/// Concentration pattern of a synthetic world.
enum class Gradient {
    uniform,        // gentle west-east slope, jobs spread evenly
    work_hotspot,   // concentration peak at the job centre
};

std::string_view to_string(Gradient g);
Gradient parse_gradient(std::string_view name);  // accepts "work-centered hotspot"

struct SynthSpec {
    std::uint64_t seed = 1;
    std::size_t n_tracts = 100;
    std::size_t n_groups = 3;  // categories per characteristic, capped per schema
    Gradient gradient = Gradient::work_hotspot;
    int year = 2018;
};

/// Writes grid_<year>.asc, tracts.geojson, urban.geojson, rac_<year>.csv,
/// wac_<year>.csv, od_<year>.csv and config.json into `dir`. Output depends
/// only on the spec. Throws ConfigError for n_tracts < 2 or n_groups < 1.
void write_synth(const SynthSpec& spec, const std::filesystem::path& dir);

}  // namespace mobex
