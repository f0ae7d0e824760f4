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

#include "mobex/config.h"

#include "mobex/error.h"
#include "mobex/text_io.h"

#include <algorithm>
#include <set>

#include <fmt/format.h>
#include <json.hpp>

namespace mobex {

namespace {

using nlohmann::json;

constexpr Stage kAllStages[] = {Stage::ingest, Stage::surface, Stage::exposure, Stage::disparity,
                                Stage::bias};

const std::set<std::string> kKnownKeys = {
    "years",    "grid",    "geometry",   "urban_mask", "rac",        "wac",     "od",
    "hw_weights", "bins",  "epsilons",   "thresholds", "strata",     "stages",  "output_dir",
    "threads",  "schemas"};

template <typename T>
T get(const json& j, std::string_view key) {
    try {
        return j.at(std::string(key)).get<T>();
    } catch (const json::exception& e) {
        throw ConfigError(fmt::format("config field '{}': {}", key, e.what()));
    }
}

std::vector<std::string> path_list(const json& j, std::string_view key) {
    if (!j.contains(std::string(key))) {
        return {};
    }
    const auto& v = j.at(std::string(key));
    if (v.is_string()) {
        return {v.get<std::string>()};
    }
    if (v.is_array() && !v.empty()) {
        return get<std::vector<std::string>>(j, key);
    }
    throw ConfigError(fmt::format("config field '{}' must be a path or a non-empty list of paths",
                                  key));
}

std::vector<GroupSchema> parse_schemas(const json& j, std::string_view key) {
    std::vector<GroupSchema> out;
    if (!j.is_array()) {
        throw ConfigError(fmt::format("schemas.{} must be a list", key));
    }
    for (const auto& s : j) {
        GroupSchema g;
        const auto name = get<std::string>(s, "characteristic");
        const auto c = parse_characteristic(name);
        if (!c) {
            throw ConfigError(fmt::format("schemas.{}: unknown characteristic '{}'", key, name));
        }
        g.characteristic = *c;
        g.complete = s.value("complete", true);
        if (!s.contains("categories") || !s.at("categories").is_array()) {
            throw ConfigError(fmt::format("schemas.{}.{}: categories must be a list", key, name));
        }
        for (const auto& cat : s.at("categories")) {
            g.categories.push_back({get<std::string>(cat, "code"), get<std::string>(cat, "label")});
        }
        try {
            validate_schema(g);
        } catch (const SchemaError& e) {
            throw ConfigError(e.what());
        }
        out.push_back(std::move(g));
    }
    return out;
}

}  // namespace

std::string_view to_string(Stage s) {
    switch (s) {
        case Stage::ingest: return "ingest";
        case Stage::surface: return "surface";
        case Stage::exposure: return "exposure";
        case Stage::disparity: return "disparity";
        case Stage::bias: return "bias";
    }
    return "ingest";
}

Stage parse_stage(std::string_view name) {
    for (const Stage s : kAllStages) {
        if (to_string(s) == name) {
            return s;
        }
    }
    throw ConfigError(fmt::format("unknown stage '{}'", name));
}

std::filesystem::path RunConfig::resolve(const std::string& tmpl, int year) const {
    std::string p = tmpl;
    const std::string token = "{year}";
    const std::string value = std::to_string(year);
    for (auto pos = p.find(token); pos != std::string::npos; pos = p.find(token, pos)) {
        p.replace(pos, token.size(), value);
        pos += value.size();
    }
    const std::filesystem::path path(p);
    return path.is_absolute() ? path : base_dir / path;
}

std::vector<std::filesystem::path> RunConfig::resolve_all(const std::vector<std::string>& tmpls,
                                                          int year) const {
    std::vector<std::filesystem::path> out;
    for (const auto& t : tmpls) {
        out.push_back(resolve(t, year));
    }
    return out;
}

bool RunConfig::has_stage(Stage s) const {
    return std::find(stages.begin(), stages.end(), s) != stages.end();
}

RunConfig parse_config(std::string_view text, const std::filesystem::path& base_dir) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(fmt::format("config is not valid JSON: {}", e.what()));
    }
    if (!j.is_object()) {
        throw ConfigError("config must be a JSON object");
    }
    for (const auto& [key, value] : j.items()) {
        if (!kKnownKeys.contains(key)) {
            throw ConfigError(fmt::format("unknown config field '{}'", key));
        }
    }

    RunConfig c;
    c.base_dir = base_dir;
    c.canonical = j.dump();

    if (!j.contains("years")) {
        throw ConfigError("config field 'years' is required");
    }
    c.years = get<std::vector<int>>(j, "years");
    if (c.years.empty()) {
        throw ConfigError("config field 'years' must not be empty");
    }
    if (std::set<int>(c.years.begin(), c.years.end()).size() != c.years.size()) {
        throw ConfigError("config field 'years' has duplicates");
    }
    for (const char* key : {"grid", "geometry"}) {
        if (!j.contains(key)) {
            throw ConfigError(fmt::format("config field '{}' is required", key));
        }
    }
    c.grid = get<std::string>(j, "grid");
    c.geometry = get<std::string>(j, "geometry");
    if (j.contains("urban_mask")) {
        c.urban_mask = get<std::string>(j, "urban_mask");
    }
    c.rac = path_list(j, "rac");
    c.wac = path_list(j, "wac");
    c.od = path_list(j, "od");
    if (c.rac.empty() || c.wac.empty()) {
        throw ConfigError("config fields 'rac' and 'wac' are required");
    }

    if (j.contains("hw_weights")) {
        const auto& w = j.at("hw_weights");
        try {
            c.hw_weights = HWWeights(get<double>(w, "home"), get<double>(w, "work"));
        } catch (const DomainError& e) {
            throw ConfigError(fmt::format("hw_weights: {}", e.what()));
        }
    }
    if (j.contains("bins")) {
        c.bins = get<std::vector<std::size_t>>(j, "bins");
        for (const auto b : c.bins) {
            if (b < 2) {
                throw ConfigError(fmt::format("bin count {} is below 2", b));
            }
        }
    }
    if (j.contains("epsilons")) {
        c.epsilons = get<std::vector<double>>(j, "epsilons");
        for (const double e : c.epsilons) {
            if (!(e >= 0.0)) {
                throw ConfigError(fmt::format("epsilon {} is negative", e));
            }
        }
    }
    if (j.contains("thresholds")) {
        c.thresholds = get<std::vector<double>>(j, "thresholds");
        for (const double t : c.thresholds) {
            if (!(t > 0.0)) {
                throw ConfigError(fmt::format("threshold {} is not positive", t));
            }
        }
    }
    c.strata = j.contains("strata") ? get<bool>(j, "strata") : c.urban_mask.has_value();
    if (c.strata && !c.urban_mask) {
        throw ConfigError("strata requested but no urban_mask given");
    }

    if (j.contains("stages")) {
        for (const auto& s : get<std::vector<std::string>>(j, "stages")) {
            c.stages.push_back(parse_stage(s));
        }
        if (c.stages.empty()) {
            throw ConfigError("config field 'stages' must not be empty");
        }
        if (c.has_stage(Stage::bias) && c.od.empty()) {
            throw ConfigError("the bias stage needs an 'od' input");
        }
    } else {
        for (const Stage s : kAllStages) {
            if (s != Stage::bias || !c.od.empty()) {
                c.stages.push_back(s);
            }
        }
    }

    c.output_dir = j.contains("output_dir") ? c.resolve(get<std::string>(j, "output_dir"), 0)
                                            : base_dir / "out";
    if (j.contains("threads")) {
        const int t = get<int>(j, "threads");
        if (t < 1) {
            throw ConfigError("threads must be at least 1");
        }
        c.threads = static_cast<unsigned>(t);
    }
    if (j.contains("schemas")) {
        const auto& s = j.at("schemas");
        if (s.contains("area")) {
            c.area_schemas = parse_schemas(s.at("area"), "area");
        }
        if (s.contains("od")) {
            c.od_schemas = parse_schemas(s.at("od"), "od");
        }
    }
    return c;
}

RunConfig load_config(const std::filesystem::path& path) {
    std::string text;
    try {
        text = read_text_file(path);
    } catch (const Error& e) {
        throw ConfigError(e.what());
    }
    auto base = path.parent_path();
    if (base.empty()) {
        base = ".";
    }
    return parse_config(text, base);
}

std::vector<std::filesystem::path> input_paths(const RunConfig& config) {
    std::vector<std::filesystem::path> out;
    out.push_back(config.resolve(config.geometry, 0));
    if (config.urban_mask) {
        out.push_back(config.resolve(*config.urban_mask, 0));
    }
    for (const int year : config.years) {
        out.push_back(config.resolve(config.grid, year));
        for (const auto* list : {&config.rac, &config.wac, &config.od}) {
            for (auto& p : config.resolve_all(*list, year)) {
                out.push_back(std::move(p));
            }
        }
    }
    return out;
}

void check_inputs_exist(const RunConfig& config) {
    for (const auto& p : input_paths(config)) {
        if (!std::filesystem::is_regular_file(p)) {
            throw ConfigError(fmt::format("input file not found: {}", p.string()));
        }
    }
}

}  // namespace mobex
