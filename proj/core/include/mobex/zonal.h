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

#include "mobex/geometry.h"
#include "mobex/raster.h"

#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace mobex {

/// Census tract outline in the grid's planar coordinate system.
struct TractGeometry {
    std::string geoid;  // 11 digits
    std::vector<Polygon> polygons;
};

/// Throws MalformedGeocodeError unless `geoid` is exactly 11 ASCII digits.
void validate_tract_geoid(std::string_view geoid);

/// Checks the geoid and normalizes every ring (throws GeometryError on degenerate rings).
TractGeometry normalize_tract(TractGeometry tract);

/// Per-tract concentration surface for one year. Tracts with no valid
/// coverage are listed in `excluded` and absent from `entries`.
struct TractSurface {
    int year = 0;
    std::map<std::string, double> entries;
    std::vector<std::string> excluded;

    std::optional<double> find(const std::string& geoid) const {
        const auto it = entries.find(geoid);
        if (it == entries.end()) {
            return std::nullopt;
        }
        return it->second;
    }
};

/// Coverage-area weighted mean of the valid cells under the tract:
///   sum(value_i * area(tract n cell_i)) / sum(area(tract n cell_i)).
/// Returns nullopt when the tract covers no valid cell area.
std::optional<double> zonal_weighted_mean(const ConcentrationGrid& grid, const TractGeometry& tract);

/// Evaluates every tract (in parallel when threads > 1). Output order is by
/// ascending geoid regardless of thread count. Throws SchemaError on
/// duplicate geoids or an empty tract list.
TractSurface build_tract_surface(const ConcentrationGrid& grid, std::span<const TractGeometry> tracts,
                                 int year, unsigned threads = 1);

enum class Stratum { all, urban, rural };

std::string_view to_string(Stratum s);

struct UrbanMask {
    std::vector<Polygon> urban_polygons;
    std::map<std::string, Stratum> classification;  // urban or rural only
};

/// Minimum share of tract area inside urban polygons for an urban label.
inline constexpr double kUrbanAreaThreshold = 0.5;

/// area(tract n urban) / area(tract). Urban polygons are assumed pairwise disjoint.
double urban_area_fraction(const TractGeometry& tract, std::span<const Polygon> urban_polygons);

Stratum classify_urban(const TractGeometry& tract, std::span<const Polygon> urban_polygons);

UrbanMask build_urban_mask(std::span<const TractGeometry> tracts, std::vector<Polygon> urban_polygons,
                           unsigned threads = 1);

/// CSV with header `geoid,year,pm25`, rows in ascending geoid order.
std::string surface_to_csv(const TractSurface& surface);

/// Reads rows for `year` from a surface CSV (other years are skipped).
TractSurface read_surface_csv(const std::filesystem::path& path, int year);

}  // namespace mobex
