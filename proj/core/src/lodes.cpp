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

#include "mobex/lodes.h"

#include "mobex/error.h"
#include "mobex/log.h"
#include "mobex/numeric.h"
#include "mobex/text_io.h"

#include <algorithm>
#include <set>
#include <unordered_map>

#include <fmt/format.h>

namespace mobex {

namespace {

struct CharacteristicName {
    Characteristic c;
    std::string_view name;
};

constexpr CharacteristicName kCharacteristicNames[] = {
    {Characteristic::race, "race"},
    {Characteristic::ethnicity, "ethnicity"},
    {Characteristic::sex, "sex"},
    {Characteristic::age, "age"},
    {Characteristic::income, "income"},
    {Characteristic::education, "education"},
    {Characteristic::jobtype, "jobtype"},
    {Characteristic::od_age, "od_age"},
    {Characteristic::od_income, "od_income"},
    {Characteristic::od_supersector, "od_supersector"},
};

GroupSchema make_schema(Characteristic c, std::vector<Category> categories, bool complete = true) {
    GroupSchema s{c, std::move(categories), complete};
    validate_schema(s);
    return s;
}

// Schemas whose every column is present, with the column positions.
struct BoundSchema {
    const GroupSchema* schema;
    std::vector<std::size_t> idx;
};

std::vector<BoundSchema> bind_schemas(std::span<const GroupSchema> schemas,
                                      const std::vector<std::string>& columns) {
    std::vector<BoundSchema> out;
    for (const auto& s : schemas) {
        BoundSchema b{&s, {}};
        for (const auto& cat : s.categories) {
            const auto it = std::find(columns.begin(), columns.end(), cat.code);
            if (it == columns.end()) {
                b.idx.clear();
                break;
            }
            b.idx.push_back(static_cast<std::size_t>(it - columns.begin()));
        }
        if (!b.idx.empty()) {
            out.push_back(std::move(b));
        }
    }
    return out;
}

// Returns the name of the first violated check, or empty when the row is consistent.
std::string row_problem(const std::vector<BoundSchema>& bound, std::int64_t total,
                        const std::vector<std::int64_t>& counts) {
    if (total < 0) {
        return fmt::format("nonnegative: total {} < 0", total);
    }
    for (std::size_t k = 0; k < counts.size(); ++k) {
        if (counts[k] < 0) {
            return fmt::format("nonnegative: column {} = {} < 0", k, counts[k]);
        }
    }
    for (const auto& b : bound) {
        std::int64_t sum = 0;
        for (std::size_t i : b.idx) {
            sum += counts[i];
        }
        if (b.schema->complete ? sum != total : sum > total) {
            return fmt::format("{}: categories sum to {}, total is {}",
                               to_string(b.schema->characteristic), sum, total);
        }
    }
    return {};
}

void check_schema_set(std::span<const GroupSchema> schemas) {
    std::set<std::string> codes;
    for (const auto& s : schemas) {
        validate_schema(s);
        for (const auto& c : s.categories) {
            if (!codes.insert(c.code).second) {
                throw SchemaError(fmt::format("column {} appears in more than one schema", c.code));
            }
        }
    }
}

struct HeaderLayout {
    std::vector<std::size_t> key_idx;
    std::size_t total_idx = 0;
    std::vector<std::string> columns;
    std::vector<std::size_t> column_idx;
    std::size_t width = 0;
};

HeaderLayout parse_header(const std::string& line, const std::filesystem::path& path,
                          std::span<const std::string_view> keys, std::string_view total,
                          std::span<const GroupSchema> schemas) {
    check_schema_set(schemas);
    std::vector<std::string> names;
    for (auto f : split_csv(line)) {
        names.emplace_back(trim(f));
    }
    std::unordered_map<std::string, std::size_t> pos;
    for (std::size_t k = 0; k < names.size(); ++k) {
        if (!pos.emplace(names[k], k).second) {
            throw SchemaError(fmt::format("{}: duplicate column '{}'", path.string(), names[k]));
        }
    }
    std::set<std::string> known;
    HeaderLayout layout;
    layout.width = names.size();
    for (auto key : keys) {
        const auto it = pos.find(std::string(key));
        if (it == pos.end()) {
            throw SchemaError(fmt::format("{}: missing required column '{}'", path.string(), key));
        }
        layout.key_idx.push_back(it->second);
        known.insert(std::string(key));
    }
    const auto tot = pos.find(std::string(total));
    if (tot == pos.end()) {
        throw SchemaError(fmt::format("{}: missing required column '{}'", path.string(), total));
    }
    layout.total_idx = tot->second;
    known.insert(std::string(total));

    for (const auto& s : schemas) {
        std::vector<std::string> missing;
        for (const auto& c : s.categories) {
            if (!pos.contains(c.code)) {
                missing.push_back(c.code);
            }
        }
        if (missing.size() == s.categories.size()) {
            continue;
        }
        if (!missing.empty()) {
            throw SchemaError(fmt::format("{}: characteristic '{}' is missing column(s) {}",
                                          path.string(), to_string(s.characteristic),
                                          fmt::join(missing, ",")));
        }
        for (const auto& c : s.categories) {
            layout.columns.push_back(c.code);
            layout.column_idx.push_back(pos.at(c.code));
            known.insert(c.code);
        }
    }

    std::vector<std::string> unknown;
    for (const auto& n : names) {
        if (!known.contains(n)) {
            unknown.push_back(n);
        }
    }
    if (!unknown.empty()) {
        log::warn("ingest", fmt::format("{}: ignoring unknown column(s) {}", path.string(),
                                        fmt::join(unknown, ",")));
    }
    return layout;
}

void validate_block_geocode(std::string_view geocode, std::string_view ctx) {
    try {
        (void)block_to_tract(geocode);
    } catch (const MalformedGeocodeError& e) {
        throw MalformedGeocodeError(fmt::format("{}: {}", ctx, e.what()));
    }
}

std::size_t chunk_count(std::size_t rows, unsigned threads) {
    if (threads <= 1 || rows < 1024) {
        return 1;
    }
    return std::min<std::size_t>(threads, rows / 512);
}

void add_counts(TractCounts& into, std::int64_t total, const std::vector<std::int64_t>& counts) {
    if (into.counts.empty()) {
        into.counts.assign(counts.size(), 0);
    }
    into.total += total;
    for (std::size_t k = 0; k < counts.size(); ++k) {
        into.counts[k] += counts[k];
    }
}

template <class Key>
void merge_into(std::map<Key, TractCounts>& dst, std::map<Key, TractCounts>&& src) {
    for (auto& [key, tc] : src) {
        auto [it, inserted] = dst.try_emplace(key, std::move(tc));
        if (!inserted) {
            add_counts(it->second, tc.total, tc.counts);
        }
    }
}

std::string counts_csv(const std::vector<std::int64_t>& counts) {
    std::string out;
    for (auto c : counts) {
        out += ',';
        out += std::to_string(c);
    }
    return out;
}

}  // namespace

std::string_view to_string(Characteristic c) {
    for (const auto& n : kCharacteristicNames) {
        if (n.c == c) {
            return n.name;
        }
    }
    return "unknown";
}

std::optional<Characteristic> parse_characteristic(std::string_view name) {
    for (const auto& n : kCharacteristicNames) {
        if (n.name == name) {
            return n.c;
        }
    }
    return std::nullopt;
}

void validate_schema(const GroupSchema& schema) {
    if (schema.categories.empty()) {
        throw SchemaError(
            fmt::format("schema '{}' has no categories", to_string(schema.characteristic)));
    }
    std::set<std::string_view> codes;
    std::set<std::string_view> labels;
    for (const auto& c : schema.categories) {
        if (c.code.empty() || c.label.empty()) {
            throw SchemaError(fmt::format("schema '{}' has an empty code or label",
                                          to_string(schema.characteristic)));
        }
        if (!codes.insert(c.code).second) {
            throw SchemaError(fmt::format("schema '{}' repeats column code {}",
                                          to_string(schema.characteristic), c.code));
        }
        if (!labels.insert(c.label).second) {
            throw SchemaError(fmt::format("schema '{}' repeats label {}",
                                          to_string(schema.characteristic), c.label));
        }
    }
}

std::string group_label(const GroupSchema& schema, const Category& category) {
    return fmt::format("{}:{}", to_string(schema.characteristic), category.label);
}

std::vector<GroupSchema> lodes_area_schemas() {
    return {
        make_schema(Characteristic::age,
                    {{"CA01", "le29"}, {"CA02", "30to54"}, {"CA03", "ge55"}}),
        make_schema(Characteristic::income,
                    {{"CE01", "le1250"}, {"CE02", "1251to3333"}, {"CE03", "gt3333"}}),
        make_schema(Characteristic::jobtype,
                    {{"CNS01", "agriculture"},
                     {"CNS02", "mining"},
                     {"CNS03", "utilities"},
                     {"CNS04", "construction"},
                     {"CNS05", "manufacturing"},
                     {"CNS06", "wholesale"},
                     {"CNS07", "retail"},
                     {"CNS08", "transportation_warehousing"},
                     {"CNS09", "information"},
                     {"CNS10", "finance_insurance"},
                     {"CNS11", "real_estate"},
                     {"CNS12", "professional_services"},
                     {"CNS13", "management"},
                     {"CNS14", "administrative_waste"},
                     {"CNS15", "educational_services"},
                     {"CNS16", "healthcare"},
                     {"CNS17", "arts_entertainment"},
                     {"CNS18", "accommodation_food"},
                     {"CNS19", "other_services"},
                     {"CNS20", "public_administration"}}),
        make_schema(Characteristic::race,
                    {{"CR01", "white"},
                     {"CR02", "black"},
                     {"CR03", "native"},
                     {"CR04", "asian"},
                     {"CR05", "pacific_islander"},
                     {"CR07", "two_or_more"}}),
        make_schema(Characteristic::ethnicity, {{"CT01", "not_hispanic"}, {"CT02", "hispanic"}}),
        make_schema(Characteristic::education,
                    {{"CD01", "less_than_high_school"},
                     {"CD02", "high_school"},
                     {"CD03", "some_college"},
                     {"CD04", "bachelors_or_higher"}},
                    /*complete=*/false),
        make_schema(Characteristic::sex, {{"CS01", "male"}, {"CS02", "female"}}),
    };
}

std::vector<GroupSchema> lodes_od_schemas() {
    return {
        make_schema(Characteristic::od_age,
                    {{"SA01", "le29"}, {"SA02", "30to54"}, {"SA03", "ge55"}}),
        make_schema(Characteristic::od_income,
                    {{"SE01", "le1250"}, {"SE02", "1251to3333"}, {"SE03", "gt3333"}}),
        make_schema(Characteristic::od_supersector,
                    {{"SI01", "goods_producing"},
                     {"SI02", "trade_transport_utilities"},
                     {"SI03", "other_services"}}),
    };
}

std::string_view to_string(TableRole role) {
    return role == TableRole::residence ? "residence" : "workplace";
}

std::string block_to_tract(std::string_view geocode) {
    if (geocode.size() != 15) {
        throw MalformedGeocodeError(
            fmt::format("block geocode '{}' has {} characters, expected 15", geocode, geocode.size()));
    }
    for (char c : geocode) {
        if (c < '0' || c > '9') {
            throw MalformedGeocodeError(
                fmt::format("block geocode '{}' contains a non-digit", geocode));
        }
    }
    return std::string(geocode.substr(0, 11));
}

std::optional<std::size_t> WorkerTable::column_index(std::string_view code) const {
    const auto it = std::find(columns.begin(), columns.end(), code);
    if (it == columns.end()) {
        return std::nullopt;
    }
    return static_cast<std::size_t>(it - columns.begin());
}

std::int64_t WorkerTable::grand_total() const {
    std::int64_t t = 0;
    for (const auto& [g, r] : rows) {
        t += r.total;
    }
    return t;
}

std::optional<std::size_t> ODMatrix::column_index(std::string_view code) const {
    const auto it = std::find(columns.begin(), columns.end(), code);
    if (it == columns.end()) {
        return std::nullopt;
    }
    return static_cast<std::size_t>(it - columns.begin());
}

std::int64_t ODMatrix::grand_total() const {
    std::int64_t t = 0;
    for (const auto& e : entries) {
        t += e.total;
    }
    return t;
}

BlockTable read_area_table(const std::filesystem::path& path, TableRole role,
                           std::span<const GroupSchema> schemas) {
    LineReader reader(path);
    std::string line;
    if (!reader.next(line)) {
        throw SchemaError(fmt::format("{}: empty file", path.string()));
    }
    const std::string_view key = role == TableRole::residence ? "h_geocode" : "w_geocode";
    const std::string_view keys[] = {key};
    const HeaderLayout layout = parse_header(line, path, keys, "C000", schemas);

    BlockTable table;
    table.role = role;
    table.columns = layout.columns;
    while (reader.next(line)) {
        if (trim(line).empty()) {
            continue;
        }
        const auto f = split_csv(line);
        const std::string ctx = fmt::format("{}:{}", path.string(), reader.line_number());
        if (f.size() != layout.width) {
            throw ParseError(
                fmt::format("{}: {} fields, header has {}", ctx, f.size(), layout.width));
        }
        BlockRow row;
        row.geocode = std::string(trim(f[layout.key_idx[0]]));
        validate_block_geocode(row.geocode, ctx);
        row.total = parse_int64(f[layout.total_idx], ctx);
        row.counts.reserve(layout.column_idx.size());
        for (std::size_t k : layout.column_idx) {
            row.counts.push_back(parse_int64(f[k], ctx));
        }
        table.rows.push_back(std::move(row));
    }
    return table;
}

ODBlockTable read_od_table(const std::filesystem::path& path, std::span<const GroupSchema> schemas) {
    LineReader reader(path);
    std::string line;
    if (!reader.next(line)) {
        throw SchemaError(fmt::format("{}: empty file", path.string()));
    }
    const std::string_view keys[] = {"w_geocode", "h_geocode"};
    const HeaderLayout layout = parse_header(line, path, keys, "S000", schemas);

    ODBlockTable table;
    table.columns = layout.columns;
    while (reader.next(line)) {
        if (trim(line).empty()) {
            continue;
        }
        const auto f = split_csv(line);
        const std::string ctx = fmt::format("{}:{}", path.string(), reader.line_number());
        if (f.size() != layout.width) {
            throw ParseError(
                fmt::format("{}: {} fields, header has {}", ctx, f.size(), layout.width));
        }
        ODBlockRow row;
        row.work_geocode = std::string(trim(f[layout.key_idx[0]]));
        row.home_geocode = std::string(trim(f[layout.key_idx[1]]));
        validate_block_geocode(row.work_geocode, ctx);
        validate_block_geocode(row.home_geocode, ctx);
        row.total = parse_int64(f[layout.total_idx], ctx);
        row.counts.reserve(layout.column_idx.size());
        for (std::size_t k : layout.column_idx) {
            row.counts.push_back(parse_int64(f[k], ctx));
        }
        table.rows.push_back(std::move(row));
    }
    return table;
}

BlockTable concat(std::vector<BlockTable> tables) {
    if (tables.empty()) {
        return {};
    }
    BlockTable out = std::move(tables.front());
    for (std::size_t k = 1; k < tables.size(); ++k) {
        if (tables[k].columns != out.columns || tables[k].role != out.role) {
            throw SchemaError("cannot concatenate worker tables with different columns");
        }
        std::move(tables[k].rows.begin(), tables[k].rows.end(), std::back_inserter(out.rows));
    }
    return out;
}

ODBlockTable concat(std::vector<ODBlockTable> tables) {
    if (tables.empty()) {
        return {};
    }
    ODBlockTable out = std::move(tables.front());
    for (std::size_t k = 1; k < tables.size(); ++k) {
        if (tables[k].columns != out.columns) {
            throw SchemaError("cannot concatenate OD tables with different columns");
        }
        std::move(tables[k].rows.begin(), tables[k].rows.end(), std::back_inserter(out.rows));
    }
    return out;
}

WorkerTable aggregate_to_tracts(const BlockTable& blocks, std::span<const GroupSchema> schemas,
                                int year, unsigned threads) {
    const auto bound = bind_schemas(schemas, blocks.columns);
    const std::size_t n = blocks.rows.size();
    const std::size_t chunks = chunk_count(n, threads);
    std::vector<std::map<std::string, TractCounts>> partial(chunks);

    parallel_for(chunks, threads, [&](std::size_t c) {
        const std::size_t begin = n * c / chunks;
        const std::size_t end = n * (c + 1) / chunks;
        auto& acc = partial[c];
        for (std::size_t i = begin; i < end; ++i) {
            const BlockRow& row = blocks.rows[i];
            if (row.counts.size() != blocks.columns.size()) {
                throw ValidationError(fmt::format("row {} (block {}): {} counts for {} columns", i,
                                                  row.geocode, row.counts.size(),
                                                  blocks.columns.size()));
            }
            const std::string problem = row_problem(bound, row.total, row.counts);
            if (!problem.empty()) {
                throw ValidationError(
                    fmt::format("row {} (block {}): {}", i, row.geocode, problem));
            }
            add_counts(acc[block_to_tract(row.geocode)], row.total, row.counts);
        }
    });

    WorkerTable table;
    table.role = blocks.role;
    table.year = year;
    table.columns = blocks.columns;
    for (auto& p : partial) {
        merge_into(table.rows, std::move(p));
    }
    for (auto& [geoid, tc] : table.rows) {
        if (tc.counts.empty()) {
            tc.counts.assign(table.columns.size(), 0);
        }
    }
    return table;
}

ODMatrix aggregate_od(const ODBlockTable& blocks, std::span<const GroupSchema> schemas, int year,
                      unsigned threads) {
    using PairKey = std::pair<std::string, std::string>;
    const auto bound = bind_schemas(schemas, blocks.columns);
    const std::size_t n = blocks.rows.size();
    const std::size_t chunks = chunk_count(n, threads);
    std::vector<std::map<PairKey, TractCounts>> partial(chunks);

    parallel_for(chunks, threads, [&](std::size_t c) {
        const std::size_t begin = n * c / chunks;
        const std::size_t end = n * (c + 1) / chunks;
        auto& acc = partial[c];
        for (std::size_t i = begin; i < end; ++i) {
            const ODBlockRow& row = blocks.rows[i];
            if (row.counts.size() != blocks.columns.size()) {
                throw ValidationError(fmt::format("OD row {}: {} counts for {} columns", i,
                                                  row.counts.size(), blocks.columns.size()));
            }
            const std::string problem = row_problem(bound, row.total, row.counts);
            if (!problem.empty()) {
                throw ValidationError(fmt::format("OD row {} (home {}, work {}): {}", i,
                                                  row.home_geocode, row.work_geocode, problem));
            }
            add_counts(acc[{block_to_tract(row.home_geocode), block_to_tract(row.work_geocode)}],
                       row.total, row.counts);
        }
    });

    std::map<PairKey, TractCounts> merged;
    for (auto& p : partial) {
        merge_into(merged, std::move(p));
    }
    ODMatrix od;
    od.year = year;
    od.columns = blocks.columns;
    od.entries.reserve(merged.size());
    for (auto& [key, tc] : merged) {
        if (tc.counts.empty()) {
            tc.counts.assign(od.columns.size(), 0);
        }
        od.entries.push_back({key.first, key.second, tc.total, std::move(tc.counts)});
    }
    return od;
}

ValidationReport validate_table(const WorkerTable& table, std::span<const GroupSchema> schemas) {
    ValidationReport report;
    const auto bound = bind_schemas(schemas, table.columns);
    for (const auto& [geoid, tc] : table.rows) {
        if (tc.counts.size() != table.columns.size()) {
            report.violations.push_back(
                {geoid, "shape",
                 fmt::format("{} counts for {} columns", tc.counts.size(), table.columns.size())});
            continue;
        }
        if (tc.total < 0) {
            report.violations.push_back(
                {geoid, "nonnegative", fmt::format("total {} < 0", tc.total)});
        }
        for (std::size_t k = 0; k < tc.counts.size(); ++k) {
            if (tc.counts[k] < 0) {
                report.violations.push_back(
                    {geoid, "nonnegative",
                     fmt::format("{} = {} < 0", table.columns[k], tc.counts[k])});
            }
        }
        for (const auto& b : bound) {
            std::int64_t sum = 0;
            for (std::size_t i : b.idx) {
                sum += tc.counts[i];
            }
            const bool bad = b.schema->complete ? sum != tc.total : sum > tc.total;
            if (bad) {
                report.violations.push_back(
                    {geoid, std::string(to_string(b.schema->characteristic)),
                     fmt::format("categories sum to {}, total is {}", sum, tc.total)});
            }
        }
    }
    return report;
}

std::string worker_table_to_csv(const WorkerTable& table) {
    std::string out = "year,geoid,total";
    for (const auto& c : table.columns) {
        out += ',' + c;
    }
    out += '\n';
    for (const auto& [geoid, tc] : table.rows) {
        out += fmt::format("{},{},{}{}\n", table.year, geoid, tc.total, counts_csv(tc.counts));
    }
    return out;
}

std::string od_matrix_to_csv(const ODMatrix& od) {
    std::string out = "year,home_geoid,work_geoid,total";
    for (const auto& c : od.columns) {
        out += ',' + c;
    }
    out += '\n';
    for (const auto& e : od.entries) {
        out += fmt::format("{},{},{},{}{}\n", od.year, e.home_geoid, e.work_geoid, e.total,
                           counts_csv(e.counts));
    }
    return out;
}

std::string block_table_to_csv(const BlockTable& table) {
    std::string out = table.role == TableRole::residence ? "h_geocode,C000" : "w_geocode,C000";
    for (const auto& c : table.columns) {
        out += ',' + c;
    }
    out += '\n';
    for (const auto& r : table.rows) {
        out += fmt::format("{},{}{}\n", r.geocode, r.total, counts_csv(r.counts));
    }
    return out;
}

std::string od_block_table_to_csv(const ODBlockTable& table) {
    std::string out = "w_geocode,h_geocode,S000";
    for (const auto& c : table.columns) {
        out += ',' + c;
    }
    out += '\n';
    for (const auto& r : table.rows) {
        out += fmt::format("{},{},{}{}\n", r.work_geocode, r.home_geocode, r.total,
                           counts_csv(r.counts));
    }
    return out;
}

}  // namespace mobex
