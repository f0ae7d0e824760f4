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

#include "mobex/zonal.h"

#include "mobex/error.h"
#include "mobex/numeric.h"
#include "mobex/text_io.h"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>

#include <fmt/format.h>

namespace mobex {

void validate_tract_geoid(std::string_view geoid) {
    const bool digits = std::all_of(geoid.begin(), geoid.end(),
                                    [](char c) { return c >= '0' && c <= '9'; });
    if (geoid.size() != 11 || !digits) {
        throw MalformedGeocodeError(fmt::format("tract GEOID '{}' is not 11 digits", geoid));
    }
}

TractGeometry normalize_tract(TractGeometry tract) {
    validate_tract_geoid(tract.geoid);
    if (tract.polygons.empty()) {
        throw GeometryError(fmt::format("tract {} has no polygons", tract.geoid));
    }
    try {
        for (auto& p : tract.polygons) {
            p = normalize_polygon(std::move(p));
        }
    } catch (const GeometryError& e) {
        throw GeometryError(fmt::format("tract {}: {}", tract.geoid, e.what()));
    }
    return tract;
}

namespace {

// Tract already normalized.
std::optional<double> weighted_mean_normalized(const ConcentrationGrid& grid,
                                               const TractGeometry& tract) {
    const Box bbox = bounding_box(tract.polygons);
    const auto range = grid.cells_overlapping(bbox);
    if (range.empty()) {
        return std::nullopt;
    }

    struct BandPolygon {
        Ring exterior;
        std::vector<Ring> holes;
    };
    std::vector<BandPolygon> band;
    band.reserve(tract.polygons.size());

    // Deviations from the first covered value keep constant fields exact.
    double reference = std::numeric_limits<double>::quiet_NaN();
    double weighted = 0.0;
    double covered = 0.0;
    for (std::size_t r = range.row_begin; r < range.row_end; ++r) {
        const Box row_box = grid.cell_box(r, range.col_begin);
        band.clear();
        for (const auto& poly : tract.polygons) {
            BandPolygon bp;
            bp.exterior = clip_ring_to_band(poly.exterior, row_box.ymin, row_box.ymax);
            if (bp.exterior.empty()) {
                continue;
            }
            for (const auto& hole : poly.holes) {
                Ring h = clip_ring_to_band(hole, row_box.ymin, row_box.ymax);
                if (!h.empty()) {
                    bp.holes.push_back(std::move(h));
                }
            }
            band.push_back(std::move(bp));
        }
        if (band.empty()) {
            continue;
        }
        for (std::size_t c = range.col_begin; c < range.col_end; ++c) {
            if (!grid.is_valid(r, c)) {
                continue;
            }
            const Box cell = grid.cell_box(r, c);
            double area = 0.0;
            for (const auto& bp : band) {
                double a = std::abs(ring_signed_area(clip_ring_to_box(bp.exterior, cell)));
                for (const auto& h : bp.holes) {
                    a -= std::abs(ring_signed_area(clip_ring_to_box(h, cell)));
                }
                area += std::max(a, 0.0);
            }
            if (area > 0.0) {
                if (std::isnan(reference)) {
                    reference = grid.value(r, c);
                }
                weighted += (grid.value(r, c) - reference) * area;
                covered += area;
            }
        }
    }
    if (!(covered > 0.0)) {
        return std::nullopt;
    }
    return reference + weighted / covered;
}

}  // namespace

std::optional<double> zonal_weighted_mean(const ConcentrationGrid& grid, const TractGeometry& tract) {
    return weighted_mean_normalized(grid, normalize_tract(tract));
}

TractSurface build_tract_surface(const ConcentrationGrid& grid, std::span<const TractGeometry> tracts,
                                 int year, unsigned threads) {
    if (tracts.empty()) {
        throw SchemaError("tract list is empty");
    }
    std::vector<std::size_t> order(tracts.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return tracts[a].geoid < tracts[b].geoid; });
    for (std::size_t k = 1; k < order.size(); ++k) {
        if (tracts[order[k]].geoid == tracts[order[k - 1]].geoid) {
            throw SchemaError(fmt::format("duplicate tract GEOID {}", tracts[order[k]].geoid));
        }
    }

    std::vector<std::optional<double>> results(order.size());
    parallel_for(order.size(), threads, [&](std::size_t k) {
        results[k] = weighted_mean_normalized(grid, normalize_tract(tracts[order[k]]));
    });

    TractSurface surface;
    surface.year = year;
    for (std::size_t k = 0; k < order.size(); ++k) {
        const std::string& geoid = tracts[order[k]].geoid;
        if (results[k]) {
            surface.entries.emplace_hint(surface.entries.end(), geoid, *results[k]);
        } else {
            surface.excluded.push_back(geoid);
        }
    }
    return surface;
}

std::string_view to_string(Stratum s) {
    switch (s) {
        case Stratum::all: return "all";
        case Stratum::urban: return "urban";
        case Stratum::rural: return "rural";
    }
    return "all";
}

double urban_area_fraction(const TractGeometry& tract, std::span<const Polygon> urban_polygons) {
    const TractGeometry t = normalize_tract(tract);
    const double area = polygon_area(t.polygons);
    if (urban_polygons.empty()) {
        return 0.0;
    }
    return intersection_area(t.polygons, urban_polygons) / area;
}

Stratum classify_urban(const TractGeometry& tract, std::span<const Polygon> urban_polygons) {
    return urban_area_fraction(tract, urban_polygons) >= kUrbanAreaThreshold ? Stratum::urban
                                                                             : Stratum::rural;
}

UrbanMask build_urban_mask(std::span<const TractGeometry> tracts, std::vector<Polygon> urban_polygons,
                           unsigned threads) {
    UrbanMask mask;
    for (auto& p : urban_polygons) {
        mask.urban_polygons.push_back(normalize_polygon(std::move(p)));
    }
    std::vector<Stratum> labels(tracts.size(), Stratum::rural);
    parallel_for(tracts.size(), threads, [&](std::size_t k) {
        labels[k] = classify_urban(tracts[k], mask.urban_polygons);
    });
    for (std::size_t k = 0; k < tracts.size(); ++k) {
        if (!mask.classification.emplace(tracts[k].geoid, labels[k]).second) {
            throw SchemaError(fmt::format("duplicate tract GEOID {}", tracts[k].geoid));
        }
    }
    return mask;
}

std::string surface_to_csv(const TractSurface& surface) {
    std::string out = "geoid,year,pm25\n";
    for (const auto& [geoid, value] : surface.entries) {
        out += fmt::format("{},{},{}\n", geoid, surface.year, format_double(value));
    }
    return out;
}

TractSurface read_surface_csv(const std::filesystem::path& path, int year) {
    LineReader reader(path);
    std::string line;
    if (!reader.next(line) || trim(line) != "geoid,year,pm25") {
        throw ParseError(fmt::format("{}: expected header 'geoid,year,pm25'", path.string()));
    }
    TractSurface surface;
    surface.year = year;
    while (reader.next(line)) {
        if (trim(line).empty()) {
            continue;
        }
        const auto f = split_csv(line);
        const std::string ctx = fmt::format("{}:{}", path.string(), reader.line_number());
        if (f.size() != 3) {
            throw ParseError(fmt::format("{}: expected 3 fields", ctx));
        }
        if (parse_int64(f[1], ctx) != year) {
            continue;
        }
        std::string geoid(trim(f[0]));
        validate_tract_geoid(geoid);
        const double v = parse_double(f[2], ctx);
        if (!(v >= 0.0) || !std::isfinite(v)) {
            throw SchemaError(fmt::format("{}: concentration must be finite and >= 0", ctx));
        }
        if (!surface.entries.emplace(geoid, v).second) {
            throw SchemaError(fmt::format("{}: duplicate GEOID {}", ctx, geoid));
        }
    }
    return surface;
}

}  // namespace mobex
