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

#include "mobex/synth.h"

#include "mobex/error.h"
#include "mobex/geojson.h"
#include "mobex/lodes.h"
#include "mobex/raster.h"
#include "mobex/text_io.h"
#include "mobex/zonal.h"

#include <algorithm>
#include <cmath>
#include <tuple>
#include <random>

#include <fmt/format.h>
#include <json.hpp>

namespace mobex {

namespace {

constexpr double kTractSize = 4.0;
constexpr double kCellSize = 1.5;
constexpr std::size_t kBlocksPerTract = 2;

class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}
    // Uniform on [0, 1) from the top 53 bits; independent of library distributions.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

private:
    std::mt19937_64 engine_;
};

// Integer split of `total` proportional to `weights` (largest remainder, ties by index).
std::vector<std::int64_t> split(std::int64_t total, const std::vector<double>& weights) {
    double sum = 0.0;
    for (const double w : weights) {
        sum += w;
    }
    std::vector<std::int64_t> out(weights.size(), 0);
    std::vector<std::pair<double, std::size_t>> rem;
    std::int64_t used = 0;
    for (std::size_t i = 0; i < weights.size(); ++i) {
        const double exact = static_cast<double>(total) * weights[i] / sum;
        out[i] = static_cast<std::int64_t>(std::floor(exact));
        used += out[i];
        rem.push_back({exact - static_cast<double>(out[i]), i});
    }
    std::stable_sort(rem.begin(), rem.end(),
                     [](const auto& a, const auto& b) { return a.first > b.first; });
    for (std::size_t k = 0; used < total; ++k, ++used) {
        ++out[rem[k % rem.size()].second];
    }
    return out;
}

GroupSchema first_categories(const GroupSchema& s, std::size_t n) {
    GroupSchema out = s;
    out.categories.resize(std::min(n, s.categories.size()));
    return out;
}

const GroupSchema& schema_of(const std::vector<GroupSchema>& list, Characteristic c) {
    return *std::find_if(list.begin(), list.end(),
                         [&](const GroupSchema& s) { return s.characteristic == c; });
}

// Category shares that drift with position so groups differ in exposure.
std::vector<double> shares(std::size_t n, double x, double y, double phase) {
    std::vector<double> w(n);
    for (std::size_t k = 0; k < n; ++k) {
        const double kk = static_cast<double>(k);
        w[k] = 1.0 + 0.8 * std::sin(phase + 1.7 * kk + 2.0 * x + 1.3 * kk * y);
    }
    return w;
}

nlohmann::ordered_json schema_json(const std::vector<GroupSchema>& schemas) {
    auto arr = nlohmann::ordered_json::array();
    for (const auto& s : schemas) {
        nlohmann::ordered_json j;
        j["characteristic"] = std::string(to_string(s.characteristic));
        j["complete"] = s.complete;
        j["categories"] = nlohmann::ordered_json::array();
        for (const auto& c : s.categories) {
            j["categories"].push_back({{"code", c.code}, {"label", c.label}});
        }
        arr.push_back(std::move(j));
    }
    return arr;
}

}  // namespace

std::string_view to_string(Gradient g) {
    return g == Gradient::uniform ? "uniform" : "work-centered hotspot";
}

Gradient parse_gradient(std::string_view name) {
    if (name == "uniform") {
        return Gradient::uniform;
    }
    if (name == "work-centered hotspot" || name == "hotspot" || name == "work-hotspot") {
        return Gradient::work_hotspot;
    }
    throw ConfigError(fmt::format("unknown gradient '{}'", name));
}

void write_synth(const SynthSpec& spec, const std::filesystem::path& dir) {
    if (spec.n_tracts < 2) {
        throw ConfigError("a synthetic world needs at least 2 tracts");
    }
    if (spec.n_groups < 1) {
        throw ConfigError("a synthetic world needs at least 1 group per characteristic");
    }
    Rng rng(spec.seed);
    const std::size_t n = spec.n_tracts;
    const auto cols = static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(n))));
    const std::size_t rows = (n + cols - 1) / cols;
    const double width = static_cast<double>(cols) * kTractSize;
    const double height = static_cast<double>(rows) * kTractSize;
    const double cx = width / 2.0;
    const double cy = height / 2.0;
    const double radius = 0.2 * std::max(width, height);

    const auto field = [&](double x, double y) {
        if (spec.gradient == Gradient::uniform) {
            return 9.0 + 2.0 * x / width;
        }
        const double d2 = (x - cx) * (x - cx) + (y - cy) * (y - cy);
        return 7.0 + 9.0 * std::exp(-d2 / (2.0 * radius * radius));
    };

    // Tracts: a row-major lattice of squares; two states split the list.
    std::vector<TractGeometry> tracts;
    std::vector<std::pair<double, double>> centres;
    for (std::size_t i = 0; i < n; ++i) {
        const double x0 = static_cast<double>(i % cols) * kTractSize;
        const double y0 = static_cast<double>(i / cols) * kTractSize;
        TractGeometry t;
        t.geoid = fmt::format("{}031{:06d}", i < n / 2 ? "17" : "18", 100 + i);
        Polygon p;
        p.exterior = {{x0, y0}, {x0 + kTractSize, y0}, {x0 + kTractSize, y0 + kTractSize},
                      {x0, y0 + kTractSize}, {x0, y0}};
        t.polygons.push_back(std::move(p));
        tracts.push_back(std::move(t));
        centres.push_back({x0 + kTractSize / 2.0, y0 + kTractSize / 2.0});
    }

    // Grid sampled at cell centres.
    const auto n_cols = static_cast<std::size_t>(std::ceil(width / kCellSize));
    const auto n_rows = static_cast<std::size_t>(std::ceil(height / kCellSize));
    std::vector<double> values(n_rows * n_cols);
    for (std::size_t r = 0; r < n_rows; ++r) {
        for (std::size_t c = 0; c < n_cols; ++c) {
            const double x = (static_cast<double>(c) + 0.5) * kCellSize;
            const double y = (static_cast<double>(n_rows - 1 - r) + 0.5) * kCellSize;
            values[r * n_cols + c] = std::round(field(x, y) * 1000.0) / 1000.0;
        }
    }
    const ConcentrationGrid grid(0.0, 0.0, kCellSize, kCellSize, n_rows, n_cols, std::move(values));

    // Commuting flows at tract level.
    std::vector<double> job_weight(n);
    for (std::size_t j = 0; j < n; ++j) {
        const auto [x, y] = centres[j];
        if (spec.gradient == Gradient::uniform) {
            job_weight[j] = 0.5 + rng.uniform();
        } else {
            const double d2 = (x - cx) * (x - cx) + (y - cy) * (y - cy);
            job_weight[j] = 0.02 + std::exp(-d2 / (2.0 * radius * radius)) * (0.8 + 0.4 * rng.uniform());
        }
    }

    const auto area = lodes_area_schemas();
    const auto od_defaults = lodes_od_schemas();
    const std::vector<GroupSchema> area_schemas = {
        first_categories(schema_of(area, Characteristic::race), spec.n_groups),
        first_categories(schema_of(area, Characteristic::income), spec.n_groups)};
    const std::vector<GroupSchema> od_schemas = {
        first_categories(schema_of(od_defaults, Characteristic::od_age), spec.n_groups),
        first_categories(schema_of(od_defaults, Characteristic::od_income), spec.n_groups)};

    const auto block = [&](std::size_t tract, std::size_t b) {
        return fmt::format("{}{:04d}", tracts[tract].geoid, 1000 + b);
    };
    const std::size_t n_cat_rac = area_schemas[0].categories.size() + area_schemas[1].categories.size();

    ODBlockTable od;
    for (const auto& s : od_schemas) {
        for (const auto& c : s.categories) {
            od.columns.push_back(c.code);
        }
    }
    std::vector<std::int64_t> home_total(n * kBlocksPerTract, 0);
    std::vector<std::int64_t> work_total(n * kBlocksPerTract, 0);
    for (std::size_t h = 0; h < n; ++h) {
        const auto residents = static_cast<std::int64_t>(200 + std::floor(400.0 * rng.uniform()));
        std::vector<double> w(n);
        for (std::size_t j = 0; j < n; ++j) {
            w[j] = job_weight[j] * (0.5 + rng.uniform());
        }
        const auto flows = split(residents, w);
        for (std::size_t j = 0; j < n; ++j) {
            if (flows[j] == 0) {
                continue;
            }
            ODBlockRow row;
            const std::size_t hb = j % kBlocksPerTract;
            const std::size_t wb = h % kBlocksPerTract;
            row.home_geocode = block(h, hb);
            row.work_geocode = block(j, wb);
            row.total = flows[j];
            double phase = 0.3;
            for (const auto& s : od_schemas) {
                const auto parts = split(row.total, shares(s.categories.size(), centres[h].first / width,
                                                           centres[j].second / height, phase));
                row.counts.insert(row.counts.end(), parts.begin(), parts.end());
                phase += 1.1;
            }
            home_total[h * kBlocksPerTract + hb] += row.total;
            work_total[j * kBlocksPerTract + wb] += row.total;
            od.rows.push_back(std::move(row));
        }
    }
    std::sort(od.rows.begin(), od.rows.end(), [](const ODBlockRow& a, const ODBlockRow& b) {
        return std::tie(a.work_geocode, a.home_geocode) < std::tie(b.work_geocode, b.home_geocode);
    });

    const auto area_table = [&](TableRole role, const std::vector<std::int64_t>& totals) {
        BlockTable t;
        t.role = role;
        for (const auto& s : area_schemas) {
            for (const auto& c : s.categories) {
                t.columns.push_back(c.code);
            }
        }
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t b = 0; b < kBlocksPerTract; ++b) {
                const auto total = totals[i * kBlocksPerTract + b];
                if (total == 0) {
                    continue;
                }
                BlockRow row;
                row.geocode = block(i, b);
                row.total = total;
                row.counts.reserve(n_cat_rac);
                double phase = role == TableRole::residence ? 0.0 : 0.7;
                for (const auto& s : area_schemas) {
                    const auto parts = split(total, shares(s.categories.size(), centres[i].first / width,
                                                           centres[i].second / height, phase));
                    row.counts.insert(row.counts.end(), parts.begin(), parts.end());
                    phase += 2.3;
                }
                t.rows.push_back(std::move(row));
            }
        }
        return t;
    };

    std::filesystem::create_directories(dir);
    const auto year = std::to_string(spec.year);
    write_text_file(dir / ("grid_" + year + ".asc"), to_esri_ascii(grid));
    write_text_file(dir / "tracts.geojson", tracts_to_geojson(tracts));
    Polygon urban;
    urban.exterior = {{width / 4, height / 4}, {3 * width / 4, height / 4},
                      {3 * width / 4, 3 * height / 4}, {width / 4, 3 * height / 4}, {width / 4, height / 4}};
    const std::vector<Polygon> urban_polys{urban};
    write_text_file(dir / "urban.geojson", polygons_to_geojson(urban_polys));
    write_text_file(dir / ("rac_" + year + ".csv"),
                    block_table_to_csv(area_table(TableRole::residence, home_total)));
    write_text_file(dir / ("wac_" + year + ".csv"),
                    block_table_to_csv(area_table(TableRole::workplace, work_total)));
    write_text_file(dir / ("od_" + year + ".csv"), od_block_table_to_csv(od));

    nlohmann::ordered_json config;
    config["years"] = {spec.year};
    config["grid"] = "grid_{year}.asc";
    config["geometry"] = "tracts.geojson";
    config["urban_mask"] = "urban.geojson";
    config["rac"] = "rac_{year}.csv";
    config["wac"] = "wac_{year}.csv";
    config["od"] = "od_{year}.csv";
    std::vector<std::size_t> bins;
    bins.push_back(std::min<std::size_t>(100, n));
    if (n >= 10 && bins.front() != 10) {
        bins.push_back(10);
    }
    config["bins"] = bins;
    config["strata"] = true;
    config["output_dir"] = "out";
    config["threads"] = 1;
    config["schemas"] = {{"area", schema_json(area_schemas)}, {"od", schema_json(od_schemas)}};
    write_text_file(dir / "config.json", config.dump(2) + "\n");
}

}  // namespace mobex
