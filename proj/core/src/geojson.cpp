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

#include "mobex/geojson.h"

#include "mobex/error.h"
#include "mobex/text_io.h"

#include <set>

#include <fmt/format.h>
#include <json.hpp>

namespace mobex {

namespace {

using nlohmann::json;

Ring parse_ring(const json& j, std::string_view ctx) {
    if (!j.is_array()) {
        throw ParseError(fmt::format("{}: ring must be an array of positions", ctx));
    }
    Ring ring;
    ring.reserve(j.size());
    for (const auto& pos : j) {
        if (!pos.is_array() || pos.size() < 2 || !pos[0].is_number() || !pos[1].is_number()) {
            throw ParseError(fmt::format("{}: position must be [x, y]", ctx));
        }
        ring.push_back({pos[0].get<double>(), pos[1].get<double>()});
    }
    return ring;
}

Polygon parse_polygon(const json& j, std::string_view ctx) {
    if (!j.is_array() || j.empty()) {
        throw ParseError(fmt::format("{}: polygon must have at least one ring", ctx));
    }
    Polygon p;
    p.exterior = parse_ring(j[0], ctx);
    for (std::size_t k = 1; k < j.size(); ++k) {
        p.holes.push_back(parse_ring(j[k], ctx));
    }
    return normalize_polygon(std::move(p));
}

std::vector<Polygon> parse_geometry(const json& g, std::string_view ctx) {
    if (!g.is_object() || !g.contains("type") || !g.contains("coordinates")) {
        throw ParseError(fmt::format("{}: geometry must have type and coordinates", ctx));
    }
    const std::string type = g["type"].get<std::string>();
    const json& coords = g["coordinates"];
    std::vector<Polygon> out;
    if (type == "Polygon") {
        out.push_back(parse_polygon(coords, ctx));
    } else if (type == "MultiPolygon") {
        if (!coords.is_array()) {
            throw ParseError(fmt::format("{}: MultiPolygon coordinates must be an array", ctx));
        }
        for (const auto& poly : coords) {
            out.push_back(parse_polygon(poly, ctx));
        }
    } else {
        throw ParseError(
            fmt::format("{}: unsupported geometry type '{}' (Polygon/MultiPolygon only)", ctx, type));
    }
    return out;
}

GeoFeature parse_feature(const json& f, std::string_view ctx) {
    if (!f.is_object() || f.value("type", "") != "Feature") {
        throw ParseError(fmt::format("{}: expected a Feature object", ctx));
    }
    if (!f.contains("geometry") || f["geometry"].is_null()) {
        throw ParseError(fmt::format("{}: feature has no geometry", ctx));
    }
    GeoFeature out;
    if (f.contains("properties") && f["properties"].is_object()) {
        const json& props = f["properties"];
        if (props.contains("GEOID")) {
            if (!props["GEOID"].is_string()) {
                throw ParseError(fmt::format("{}: GEOID must be a string", ctx));
            }
            out.geoid = props["GEOID"].get<std::string>();
        }
    }
    const std::string fctx =
        out.geoid ? fmt::format("{} (GEOID {})", ctx, *out.geoid) : std::string(ctx);
    out.polygons = parse_geometry(f["geometry"], fctx);
    return out;
}

json ring_json(const Ring& ring) {
    json arr = json::array();
    for (const auto& p : ring) {
        arr.push_back(json::array({p.x, p.y}));
    }
    return arr;
}

json polygons_geometry(std::span<const Polygon> polygons) {
    json coords = json::array();
    for (const auto& p : polygons) {
        json rings = json::array();
        rings.push_back(ring_json(p.exterior));
        for (const auto& h : p.holes) {
            rings.push_back(ring_json(h));
        }
        coords.push_back(std::move(rings));
    }
    if (coords.size() == 1) {
        return json{{"type", "Polygon"}, {"coordinates", coords[0]}};
    }
    return json{{"type", "MultiPolygon"}, {"coordinates", coords}};
}

}  // namespace

std::vector<GeoFeature> parse_geojson(std::string_view text, std::string_view source) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::exception& e) {
        throw ParseError(fmt::format("{}: invalid JSON: {}", source, e.what()));
    }
    std::vector<GeoFeature> out;
    try {
        const std::string type = doc.value("type", "");
        if (type == "FeatureCollection") {
            if (!doc.contains("features") || !doc["features"].is_array()) {
                throw ParseError(fmt::format("{}: FeatureCollection without features", source));
            }
            std::size_t k = 0;
            for (const auto& f : doc["features"]) {
                out.push_back(parse_feature(f, fmt::format("{}: feature {}", source, k++)));
            }
        } else if (type == "Feature") {
            out.push_back(parse_feature(doc, source));
        } else {
            throw ParseError(fmt::format("{}: expected FeatureCollection or Feature", source));
        }
    } catch (const json::exception& e) {
        throw ParseError(fmt::format("{}: malformed GeoJSON: {}", source, e.what()));
    }
    return out;
}

std::vector<TractGeometry> read_tract_geojson(const std::filesystem::path& path) {
    const auto features = parse_geojson(read_text_file(path), path.string());
    std::vector<TractGeometry> tracts;
    std::set<std::string> seen;
    tracts.reserve(features.size());
    for (std::size_t k = 0; k < features.size(); ++k) {
        const auto& f = features[k];
        if (!f.geoid) {
            throw SchemaError(fmt::format("{}: feature {} has no GEOID property", path.string(), k));
        }
        validate_tract_geoid(*f.geoid);
        if (!seen.insert(*f.geoid).second) {
            throw SchemaError(fmt::format("{}: duplicate GEOID {}", path.string(), *f.geoid));
        }
        tracts.push_back({*f.geoid, f.polygons});
    }
    return tracts;
}

std::vector<Polygon> read_polygon_geojson(const std::filesystem::path& path) {
    std::vector<Polygon> out;
    for (auto& f : parse_geojson(read_text_file(path), path.string())) {
        for (auto& p : f.polygons) {
            out.push_back(std::move(p));
        }
    }
    return out;
}

std::string tracts_to_geojson(std::span<const TractGeometry> tracts) {
    json features = json::array();
    for (const auto& t : tracts) {
        features.push_back(json{{"type", "Feature"},
                                {"properties", json{{"GEOID", t.geoid}}},
                                {"geometry", polygons_geometry(t.polygons)}});
    }
    return json{{"type", "FeatureCollection"}, {"features", features}}.dump() + "\n";
}

std::string polygons_to_geojson(std::span<const Polygon> polygons) {
    json features = json::array();
    for (const auto& p : polygons) {
        features.push_back(json{{"type", "Feature"},
                                {"properties", json::object()},
                                {"geometry", polygons_geometry(std::span<const Polygon>(&p, 1))}});
    }
    return json{{"type", "FeatureCollection"}, {"features", features}}.dump() + "\n";
}

}  // namespace mobex
