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

#include "mobex/raster.h"

#include "mobex/error.h"
#include "mobex/text_io.h"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>
#include <optional>

#include <fmt/format.h>

namespace mobex {

ConcentrationGrid::ConcentrationGrid(double origin_x, double origin_y, double cell_width,
                                     double cell_height, std::size_t n_rows, std::size_t n_cols,
                                     std::vector<double> values, std::vector<std::uint8_t> valid)
    : origin_x_(origin_x),
      origin_y_(origin_y),
      cell_width_(cell_width),
      cell_height_(cell_height),
      n_rows_(n_rows),
      n_cols_(n_cols),
      values_(std::move(values)),
      valid_(std::move(valid)) {
    if (!(cell_width_ > 0.0) || !(cell_height_ > 0.0) || !std::isfinite(cell_width_) ||
        !std::isfinite(cell_height_)) {
        throw SchemaError("grid cell width and height must be positive");
    }
    if (!std::isfinite(origin_x_) || !std::isfinite(origin_y_)) {
        throw SchemaError("grid origin must be finite");
    }
    if (n_rows_ == 0 || n_cols_ == 0) {
        throw SchemaError("grid must have at least one row and one column");
    }
    if (values_.size() != n_rows_ * n_cols_) {
        throw SchemaError(fmt::format("grid has {} values, expected {} x {}", values_.size(),
                                      n_rows_, n_cols_));
    }
    if (valid_.empty()) {
        valid_.assign(values_.size(), 1);
    } else if (valid_.size() != values_.size()) {
        throw SchemaError("grid nodata mask size does not match value count");
    }
    for (std::size_t i = 0; i < values_.size(); ++i) {
        if (valid_[i] != 0 && (!std::isfinite(values_[i]) || values_[i] < 0.0)) {
            throw SchemaError(fmt::format("grid cell {} has invalid concentration {}", i,
                                          values_[i]));
        }
    }
}

Box ConcentrationGrid::cell_box(std::size_t row, std::size_t col) const {
    const double x0 = origin_x_ + static_cast<double>(col) * cell_width_;
    const double y0 = origin_y_ + static_cast<double>(n_rows_ - 1 - row) * cell_height_;
    return {x0, y0, x0 + cell_width_, y0 + cell_height_};
}

Box ConcentrationGrid::extent() const {
    return {origin_x_, origin_y_, origin_x_ + static_cast<double>(n_cols_) * cell_width_,
            origin_y_ + static_cast<double>(n_rows_) * cell_height_};
}

ConcentrationGrid::CellRange ConcentrationGrid::cells_overlapping(const Box& box) const {
    auto clamp_index = [](double v, std::size_t hi) {
        if (!(v > 0.0)) {
            return std::size_t{0};
        }
        if (v >= static_cast<double>(hi)) {
            return hi;
        }
        return static_cast<std::size_t>(v);
    };
    CellRange r;
    r.col_begin = clamp_index(std::floor((box.xmin - origin_x_) / cell_width_), n_cols_);
    r.col_end = clamp_index(std::floor((box.xmax - origin_x_) / cell_width_) + 1.0, n_cols_);
    const std::size_t yb_begin =
        clamp_index(std::floor((box.ymin - origin_y_) / cell_height_), n_rows_);
    const std::size_t yb_end =
        clamp_index(std::floor((box.ymax - origin_y_) / cell_height_) + 1.0, n_rows_);
    r.row_begin = n_rows_ - yb_end;
    r.row_end = n_rows_ - yb_begin;
    return r;
}

bool ConcentrationGrid::locate(const Point& p, std::size_t& row, std::size_t& col) const {
    const double fx = std::floor((p.x - origin_x_) / cell_width_);
    const double fy = std::floor((p.y - origin_y_) / cell_height_);
    if (fx < 0.0 || fy < 0.0 || fx >= static_cast<double>(n_cols_) ||
        fy >= static_cast<double>(n_rows_)) {
        return false;
    }
    col = static_cast<std::size_t>(fx);
    row = n_rows_ - 1 - static_cast<std::size_t>(fy);
    return true;
}

ConcentrationGrid ConcentrationGrid::translated(double dx, double dy) const {
    return ConcentrationGrid(origin_x_ + dx, origin_y_ + dy, cell_width_, cell_height_, n_rows_,
                             n_cols_, values_, valid_);
}

namespace {

std::string lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

bool starts_alpha(std::string_view tok) {
    return !tok.empty() && std::isalpha(static_cast<unsigned char>(tok[0])) != 0 &&
           lower(tok) != "nan" && lower(tok) != "inf";
}

}  // namespace

ConcentrationGrid parse_esri_ascii(std::string_view text, std::string_view source) {
    std::vector<std::string_view> tokens;
    std::size_t i = 0;
    while (i < text.size()) {
        while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i])) != 0) {
            ++i;
        }
        const std::size_t start = i;
        while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i])) == 0) {
            ++i;
        }
        if (i > start) {
            tokens.push_back(text.substr(start, i - start));
        }
    }

    std::map<std::string, double> header;
    std::size_t pos = 0;
    while (pos + 1 < tokens.size() && starts_alpha(tokens[pos])) {
        const std::string key = lower(tokens[pos]);
        const std::string context = fmt::format("{}: header '{}'", source, key);
        header[key] = parse_double(tokens[pos + 1], context);
        pos += 2;
    }

    auto need = [&](const char* key) {
        const auto it = header.find(key);
        if (it == header.end()) {
            throw ParseError(fmt::format("{}: missing header keyword '{}'", source, key));
        }
        return it->second;
    };
    auto optional_key = [&](const char* key) -> std::optional<double> {
        const auto it = header.find(key);
        if (it == header.end()) {
            return std::nullopt;
        }
        return it->second;
    };

    const double ncols_d = need("ncols");
    const double nrows_d = need("nrows");
    if (ncols_d < 1 || nrows_d < 1 || ncols_d != std::floor(ncols_d) ||
        nrows_d != std::floor(nrows_d)) {
        throw ParseError(fmt::format("{}: ncols/nrows must be positive integers", source));
    }
    const auto ncols = static_cast<std::size_t>(ncols_d);
    const auto nrows = static_cast<std::size_t>(nrows_d);

    double dx = 0.0;
    double dy = 0.0;
    if (auto cs = optional_key("cellsize")) {
        dx = dy = *cs;
    } else if (optional_key("dx") && optional_key("dy")) {
        dx = *optional_key("dx");
        dy = *optional_key("dy");
    } else {
        throw ParseError(fmt::format("{}: missing header keyword 'cellsize'", source));
    }

    double x0 = 0.0;
    double y0 = 0.0;
    if (auto v = optional_key("xllcorner")) {
        x0 = *v;
    } else if (auto c = optional_key("xllcenter")) {
        x0 = *c - dx / 2.0;
    } else {
        throw ParseError(fmt::format("{}: missing header keyword 'xllcorner'", source));
    }
    if (auto v = optional_key("yllcorner")) {
        y0 = *v;
    } else if (auto c = optional_key("yllcenter")) {
        y0 = *c - dy / 2.0;
    } else {
        throw ParseError(fmt::format("{}: missing header keyword 'yllcorner'", source));
    }
    const std::optional<double> nodata = optional_key("nodata_value");

    const std::size_t expected = nrows * ncols;
    if (tokens.size() - pos != expected) {
        throw ParseError(fmt::format("{}: expected {} cell values, found {}", source, expected,
                                     tokens.size() - pos));
    }
    std::vector<double> values(expected, 0.0);
    std::vector<std::uint8_t> valid(expected, 1);
    for (std::size_t k = 0; k < expected; ++k) {
        const std::string_view tok = tokens[pos + k];
        const std::string low = lower(tok);
        if (low == "nan" || low == "-nan") {
            valid[k] = 0;
            continue;
        }
        const double v =
            parse_double(tok, fmt::format("{}: cell {} (row {})", source, k, k / ncols));
        if (nodata && v == *nodata) {
            valid[k] = 0;
            continue;
        }
        values[k] = v;
    }
    return ConcentrationGrid(x0, y0, dx, dy, nrows, ncols, std::move(values), std::move(valid));
}

ConcentrationGrid read_esri_ascii(const std::filesystem::path& path) {
    return parse_esri_ascii(read_text_file(path), path.string());
}

std::string to_esri_ascii(const ConcentrationGrid& grid) {
    std::string out;
    out += fmt::format("ncols {}\nnrows {}\n", grid.n_cols(), grid.n_rows());
    out += fmt::format("xllcorner {}\nyllcorner {}\n", format_double(grid.origin_x()),
                       format_double(grid.origin_y()));
    if (grid.cell_width() == grid.cell_height()) {
        out += fmt::format("cellsize {}\n", format_double(grid.cell_width()));
    } else {
        out += fmt::format("dx {}\ndy {}\n", format_double(grid.cell_width()),
                           format_double(grid.cell_height()));
    }
    out += "NODATA_value -9999\n";
    for (std::size_t r = 0; r < grid.n_rows(); ++r) {
        for (std::size_t c = 0; c < grid.n_cols(); ++c) {
            if (c > 0) {
                out += ' ';
            }
            out += grid.is_valid(r, c) ? format_double(grid.value(r, c)) : std::string("-9999");
        }
        out += '\n';
    }
    return out;
}

ConcentrationGrid read_xyz_csv(const std::filesystem::path& path) {
    LineReader reader(path);
    std::string line;
    if (!reader.next(line)) {
        throw ParseError(fmt::format("{}: empty file", path.string()));
    }
    const auto header = split_csv(line);
    int ix = -1;
    int iy = -1;
    int iv = -1;
    for (std::size_t k = 0; k < header.size(); ++k) {
        const std::string h = lower(trim(header[k]));
        if (h == "x") ix = static_cast<int>(k);
        if (h == "y") iy = static_cast<int>(k);
        if (h == "value") iv = static_cast<int>(k);
    }
    if (ix < 0 || iy < 0 || iv < 0) {
        throw ParseError(fmt::format("{}: header must contain x,y,value", path.string()));
    }

    struct Sample {
        double x;
        double y;
        std::optional<double> v;
    };
    std::vector<Sample> samples;
    const std::size_t width = static_cast<std::size_t>(std::max({ix, iy, iv})) + 1;
    while (reader.next(line)) {
        if (trim(line).empty()) {
            continue;
        }
        const auto f = split_csv(line);
        const std::string ctx = fmt::format("{}:{}", path.string(), reader.line_number());
        if (f.size() < width) {
            throw ParseError(fmt::format("{}: too few fields", ctx));
        }
        Sample s{parse_double(f[ix], ctx), parse_double(f[iy], ctx), std::nullopt};
        const std::string raw = lower(trim(f[iv]));
        if (!raw.empty() && raw != "na" && raw != "nan") {
            s.v = parse_double(f[iv], ctx);
        }
        samples.push_back(s);
    }
    if (samples.empty()) {
        throw ParseError(fmt::format("{}: no samples", path.string()));
    }

    auto lattice = [&](auto proj, const char* axis) {
        std::vector<double> u;
        u.reserve(samples.size());
        for (const auto& s : samples) {
            u.push_back(proj(s));
        }
        std::sort(u.begin(), u.end());
        u.erase(std::unique(u.begin(), u.end()), u.end());
        if (u.size() < 2) {
            throw ParseError(fmt::format("{}: need at least two distinct {} coordinates to infer "
                                         "cell size",
                                         path.string(), axis));
        }
        double step = u[1] - u[0];
        for (std::size_t k = 2; k < u.size(); ++k) {
            step = std::min(step, u[k] - u[k - 1]);
        }
        for (std::size_t k = 1; k < u.size(); ++k) {
            const double ratio = (u[k] - u[0]) / step;
            if (std::abs(ratio - std::round(ratio)) > 1e-6) {
                throw ParseError(
                    fmt::format("{}: {} coordinates are not on a regular lattice", path.string(),
                                axis));
            }
        }
        const auto count = static_cast<std::size_t>(std::llround((u.back() - u.front()) / step)) + 1;
        return std::tuple{u.front(), step, count};
    };
    const auto [xmin, dx, ncols] = lattice([](const Sample& s) { return s.x; }, "x");
    const auto [ymin, dy, nrows] = lattice([](const Sample& s) { return s.y; }, "y");

    std::vector<double> values(nrows * ncols, 0.0);
    std::vector<std::uint8_t> valid(nrows * ncols, 0);
    std::vector<std::uint8_t> seen(nrows * ncols, 0);
    for (const auto& s : samples) {
        const auto c = static_cast<std::size_t>(std::llround((s.x - xmin) / dx));
        const auto yb = static_cast<std::size_t>(std::llround((s.y - ymin) / dy));
        const std::size_t r = nrows - 1 - yb;
        const std::size_t k = r * ncols + c;
        if (seen[k] != 0) {
            throw ParseError(fmt::format("{}: duplicate sample at ({}, {})", path.string(),
                                         format_double(s.x), format_double(s.y)));
        }
        seen[k] = 1;
        if (s.v) {
            values[k] = *s.v;
            valid[k] = 1;
        }
    }
    return ConcentrationGrid(xmin - dx / 2.0, ymin - dy / 2.0, dx, dy, nrows, ncols,
                             std::move(values), std::move(valid));
}

ConcentrationGrid read_grid(const std::filesystem::path& path) {
    const std::string name = lower(path.filename().string());
    auto ends_with = [&](std::string_view suffix) {
        return name.size() >= suffix.size() &&
               name.compare(name.size() - suffix.size(), suffix.size(), suffix) == 0;
    };
    if (ends_with(".asc")) {
        return read_esri_ascii(path);
    }
    if (ends_with(".csv") || ends_with(".csv.gz")) {
        return read_xyz_csv(path);
    }
    throw ParseError(fmt::format("{}: unsupported grid format (expected .asc or .csv)",
                                 path.string()));
}

}  // namespace mobex
