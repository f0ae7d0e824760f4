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

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace mobex {

/// Regular raster of annual-average concentrations (ug/m3).
///
/// Values are stored row-major with row 0 the northernmost row, matching the
/// ESRI ASCII layout. The origin is the lower-left corner of the grid, so
/// cell (r, c) spans
///   x in [origin_x + c * cell_width, origin_x + (c + 1) * cell_width]
///   y in [origin_y + (n_rows - 1 - r) * cell_height, ... + cell_height].
class ConcentrationGrid {
public:
    struct CellRange {
        std::size_t row_begin = 0;
        std::size_t row_end = 0;  // exclusive
        std::size_t col_begin = 0;
        std::size_t col_end = 0;  // exclusive

        bool empty() const { return row_begin >= row_end || col_begin >= col_end; }
    };

    /// `valid[i] == 0` marks cell i as nodata. An empty `valid` means all cells are valid.
    /// Throws SchemaError on size mismatch, non-positive cell size, or a
    /// negative / non-finite value in a valid cell.
    ConcentrationGrid(double origin_x, double origin_y, double cell_width, double cell_height,
                      std::size_t n_rows, std::size_t n_cols, std::vector<double> values,
                      std::vector<std::uint8_t> valid = {});

    double origin_x() const { return origin_x_; }
    double origin_y() const { return origin_y_; }
    double cell_width() const { return cell_width_; }
    double cell_height() const { return cell_height_; }
    std::size_t n_rows() const { return n_rows_; }
    std::size_t n_cols() const { return n_cols_; }

    bool is_valid(std::size_t row, std::size_t col) const { return valid_[row * n_cols_ + col] != 0; }
    double value(std::size_t row, std::size_t col) const { return values_[row * n_cols_ + col]; }

    Box cell_box(std::size_t row, std::size_t col) const;
    Box extent() const;

    /// Cells whose box can intersect `box` (closed-interval test, clamped to the grid).
    CellRange cells_overlapping(const Box& box) const;

    /// Cell containing the point, half-open on the upper edges. Returns false
    /// when the point is outside the grid.
    bool locate(const Point& p, std::size_t& row, std::size_t& col) const;

    ConcentrationGrid translated(double dx, double dy) const;

    const std::vector<double>& values() const { return values_; }
    const std::vector<std::uint8_t>& valid_mask() const { return valid_; }

private:
    double origin_x_;
    double origin_y_;
    double cell_width_;
    double cell_height_;
    std::size_t n_rows_;
    std::size_t n_cols_;
    std::vector<double> values_;
    std::vector<std::uint8_t> valid_;
};

/// ESRI ASCII Grid: header keywords ncols, nrows, xllcorner|xllcenter,
/// yllcorner|yllcenter, cellsize, optional NODATA_value (case-insensitive),
/// followed by nrows x ncols whitespace-separated values, north row first.
ConcentrationGrid parse_esri_ascii(std::string_view text, std::string_view source = "<text>");
ConcentrationGrid read_esri_ascii(const std::filesystem::path& path);

/// Serializes with xllcorner/yllcorner and NODATA_value -9999.
std::string to_esri_ascii(const ConcentrationGrid& grid);

/// CSV fallback with header `x,y,value`: one row per cell center on a regular
/// lattice. Spacing is inferred from the coordinates; lattice points that are
/// absent, or whose value is empty / NA / nan, become nodata.
ConcentrationGrid read_xyz_csv(const std::filesystem::path& path);

/// Dispatches on extension: `.asc` -> ESRI ASCII, `.csv` / `.csv.gz` -> x,y,value.
ConcentrationGrid read_grid(const std::filesystem::path& path);

}  // namespace mobex
