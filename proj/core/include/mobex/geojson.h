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

#include "mobex/zonal.h"

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

// Reader for the GeoJSON subset used for tract and urban-area boundaries:
// a FeatureCollection (or a single Feature) whose geometries are Polygon or
// MultiPolygon. Coordinates are taken as already projected to a planar CRS.
namespace mobex {

struct GeoFeature {
    std::optional<std::string> geoid;  // the `GEOID` property, when present
    std::vector<Polygon> polygons;
};

std::vector<GeoFeature> parse_geojson(std::string_view text, std::string_view source = "<text>");

/// Every feature must carry a string `GEOID` of 11 digits; geoids must be unique.
std::vector<TractGeometry> read_tract_geojson(const std::filesystem::path& path);

/// All polygons of all features, properties ignored.
std::vector<Polygon> read_polygon_geojson(const std::filesystem::path& path);

std::string tracts_to_geojson(std::span<const TractGeometry> tracts);
std::string polygons_to_geojson(std::span<const Polygon> polygons);

}  // namespace mobex
