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
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

// LODES-style worker tables: block-level RAC / WAC / OD ingestion and rollup
// of census blocks (15-digit codes) to tracts (their 11-digit prefix).
// All counts are 64-bit integers; no floating point before weighting.
namespace mobex {

enum class Characteristic {
    race,
    ethnicity,
    sex,
    age,
    income,
    education,
    jobtype,
    od_age,
    od_income,
    od_supersector,
};

std::string_view to_string(Characteristic c);
std::optional<Characteristic> parse_characteristic(std::string_view name);

struct Category {
    std::string code;   // column name, e.g. CA01
    std::string label;  // short identifier, e.g. le29
};

/// Ordered category list for one characteristic. When `complete` is true the
/// categories partition the worker total and their counts must sum to it;
/// otherwise (LODES education covers only workers aged 30+) they may sum to
/// less.
struct GroupSchema {
    Characteristic characteristic = Characteristic::race;
    std::vector<Category> categories;
    bool complete = true;
};

/// Throws SchemaError on an empty category list or a repeated column code.
void validate_schema(const GroupSchema& schema);

/// Group label used in reports: `<characteristic>:<category label>`.
std::string group_label(const GroupSchema& schema, const Category& category);

/// Default RAC / WAC schemas (LODES v7 column names).
std::vector<GroupSchema> lodes_area_schemas();
/// Default OD schemas: SA (age), SE (earnings), SI (supersector).
std::vector<GroupSchema> lodes_od_schemas();

enum class TableRole { residence, workplace };

std::string_view to_string(TableRole role);

/// First 11 characters of a 15-digit block code. Throws MalformedGeocodeError
/// on wrong length or a non-digit.
std::string block_to_tract(std::string_view geocode);

struct BlockRow {
    std::string geocode;
    std::int64_t total = 0;
    std::vector<std::int64_t> counts;  // aligned with BlockTable::columns
};

struct BlockTable {
    TableRole role = TableRole::residence;
    std::vector<std::string> columns;  // category codes present, schema order
    std::vector<BlockRow> rows;
};

struct ODBlockRow {
    std::string home_geocode;
    std::string work_geocode;
    std::int64_t total = 0;
    std::vector<std::int64_t> counts;
};

struct ODBlockTable {
    std::vector<std::string> columns;
    std::vector<ODBlockRow> rows;
};

struct TractCounts {
    std::int64_t total = 0;
    std::vector<std::int64_t> counts;
};

/// Tract-level worker counts by residence (RAC) or workplace (WAC).
struct WorkerTable {
    TableRole role = TableRole::residence;
    int year = 0;
    std::vector<std::string> columns;
    std::map<std::string, TractCounts> rows;

    /// Index of `code` in `columns`, or nullopt.
    std::optional<std::size_t> column_index(std::string_view code) const;
    std::int64_t grand_total() const;
};

struct ODEntry {
    std::string home_geoid;
    std::string work_geoid;
    std::int64_t total = 0;
    std::vector<std::int64_t> counts;
};

/// Tract-pair commuting counts, sorted by (home_geoid, work_geoid).
struct ODMatrix {
    int year = 0;
    std::vector<std::string> columns;
    std::vector<ODEntry> entries;

    std::optional<std::size_t> column_index(std::string_view code) const;
    std::int64_t grand_total() const;
};

/// Header parse for RAC (key h_geocode) / WAC (key w_geocode) files with
/// total C000. Plain or gzip input. Characteristics whose columns are all
/// absent are skipped; partially present ones and a missing key/total column
/// are SchemaErrors. Unknown columns are ignored with one warning per file.
BlockTable read_area_table(const std::filesystem::path& path, TableRole role,
                           std::span<const GroupSchema> schemas);

/// OD file with keys w_geocode,h_geocode and total S000.
ODBlockTable read_od_table(const std::filesystem::path& path, std::span<const GroupSchema> schemas);

/// Concatenates tables (e.g. one file per state). Column lists must agree.
BlockTable concat(std::vector<BlockTable> tables);
ODBlockTable concat(std::vector<ODBlockTable> tables);

/// Sums block rows per tract. Rows are checked first: negative counts or a
/// complete characteristic whose categories do not sum to the total raise
/// ValidationError naming the row and characteristic. Per-chunk partial
/// tables are merged by geoid, so the result does not depend on `threads`.
WorkerTable aggregate_to_tracts(const BlockTable& blocks, std::span<const GroupSchema> schemas,
                                int year, unsigned threads = 1);

/// Sums OD block pairs per (home tract, work tract). Same-tract pairs are kept.
ODMatrix aggregate_od(const ODBlockTable& blocks, std::span<const GroupSchema> schemas, int year,
                      unsigned threads = 1);

struct Violation {
    std::string geoid;
    std::string characteristic;  // "nonnegative" for negative-count violations
    std::string detail;
};

struct ValidationReport {
    std::vector<Violation> violations;
    bool ok() const { return violations.empty(); }
};

/// Lists every (row, characteristic) that breaks non-negativity or the
/// category-sum identity. Never throws on invalid data.
ValidationReport validate_table(const WorkerTable& table, std::span<const GroupSchema> schemas);

/// `year,geoid,total,<columns...>` in geoid order.
std::string worker_table_to_csv(const WorkerTable& table);
/// `year,home_geoid,work_geoid,total,<columns...>` in pair order.
std::string od_matrix_to_csv(const ODMatrix& od);

/// LODES-shaped block CSV (for fixtures): key column, total, category columns.
std::string block_table_to_csv(const BlockTable& table);
std::string od_block_table_to_csv(const ODBlockTable& table);

}  // namespace mobex
