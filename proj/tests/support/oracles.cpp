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

#include "oracles.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>

#ifndef MOBEX_TEST_DATA_DIR
#error "MOBEX_TEST_DATA_DIR must be defined"
#endif

namespace mobex::testing {

std::filesystem::path data_dir() { return MOBEX_TEST_DATA_DIR; }

std::filesystem::path scratch_dir(const std::string& name) {
    const auto dir = std::filesystem::temp_directory_path() / ("mobex_test_" + name);
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

namespace {

bool in_ring(const Ring& ring, Point p) {
    bool inside = false;
    for (std::size_t i = 0, j = ring.size() - 1; i < ring.size(); j = i++) {
        const auto& a = ring[i];
        const auto& b = ring[j];
        if ((a.y > p.y) != (b.y > p.y) &&
            p.x < (b.x - a.x) * (p.y - a.y) / (b.y - a.y) + a.x) {
            inside = !inside;
        }
    }
    return inside;
}

std::vector<Point> star_ring(std::mt19937_64& rng, Point c, double r_min, double r_max, int n) {
    std::uniform_real_distribution<double> radius(r_min, r_max);
    std::uniform_real_distribution<double> jitter(-0.3, 0.3);
    std::vector<Point> pts;
    for (int i = 0; i < n; ++i) {
        const double t = 2.0 * std::numbers::pi * (i + 0.5 + jitter(rng)) / n;
        const double r = radius(rng);
        pts.push_back({c.x + r * std::cos(t), c.y + r * std::sin(t)});
    }
    pts.push_back(pts.front());
    return pts;
}

}  // namespace

bool point_in_polygon(const Polygon& poly, Point p) {
    bool inside = in_ring(poly.exterior, p);
    for (const auto& h : poly.holes) {
        if (in_ring(h, p)) {
            inside = !inside;
        }
    }
    return inside;
}

double monte_carlo_zonal_mean(const ConcentrationGrid& grid, std::span<const Polygon> polys,
                              std::size_t min_accepted, std::uint64_t seed) {
    const Box bb = bounding_box(polys);
    const double fill = polygon_area(polys) / bb.area();
    const auto k = static_cast<std::size_t>(
        std::ceil(std::sqrt(1.05 * static_cast<double>(min_accepted) / fill)));
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const double dx = bb.width() / static_cast<double>(k);
    const double dy = bb.height() / static_cast<double>(k);
    long double sum = 0.0L;
    std::size_t n = 0;
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = 0; j < k; ++j) {
            const Point p{bb.xmin + (static_cast<double>(i) + u(rng)) * dx,
                          bb.ymin + (static_cast<double>(j) + u(rng)) * dy};
            bool inside = false;
            for (const auto& poly : polys) {
                inside = inside || point_in_polygon(poly, p);
            }
            if (!inside) {
                continue;
            }
            std::size_t row = 0;
            std::size_t col = 0;
            if (!grid.locate(p, row, col)) {
                continue;
            }
            if (!grid.is_valid(row, col)) {
                continue;
            }
            sum += grid.value(row, col);
            ++n;
        }
    }
    return n == 0 ? std::numeric_limits<double>::quiet_NaN() : static_cast<double>(sum / n);
}

Polygon random_star(std::mt19937_64& rng, Point centre, double r_min, double r_max,
                    int n_vertices, bool with_hole) {
    Polygon p;
    p.exterior = star_ring(rng, centre, r_min, r_max, n_vertices);
    if (with_hole) {
        auto hole = star_ring(rng, centre, 0.2 * r_min, 0.5 * r_min, std::max(3, n_vertices / 2));
        std::reverse(hole.begin(), hole.end());
        p.holes.push_back(std::move(hole));
    }
    return p;
}

double direct_u(std::span<const double> a, std::span<const double> b) {
    double u = 0.0;
    for (const double x : a) {
        for (const double y : b) {
            u += x > y ? 1.0 : (x == y ? 0.5 : 0.0);
        }
    }
    return u;
}

double exact_rank_sum_p(std::span<const double> a, std::span<const double> b) {
    const std::size_t na = a.size();
    const std::size_t n = na + b.size();
    const double mean = static_cast<double>(na * b.size()) / 2.0;
    const double observed = std::abs(direct_u(a, b) - mean);
    // Enumerate which ranks (1..n) the first sample occupies.
    std::vector<bool> pick(n, false);
    std::fill(pick.begin(), pick.begin() + static_cast<std::ptrdiff_t>(na), true);
    std::size_t total = 0;
    std::size_t extreme = 0;
    do {
        double rank_sum = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            if (pick[i]) {
                rank_sum += static_cast<double>(i + 1);
            }
        }
        const double u = rank_sum - static_cast<double>(na * (na + 1)) / 2.0;
        ++total;
        if (std::abs(u - mean) >= observed - 1e-9) {
            ++extreme;
        }
    } while (std::prev_permutation(pick.begin(), pick.end()));
    return static_cast<double>(extreme) / static_cast<double>(total);
}

std::vector<double> expand(std::span<const double> values, std::span<const std::int64_t> weights) {
    std::vector<double> out;
    for (std::size_t i = 0; i < values.size(); ++i) {
        out.insert(out.end(), static_cast<std::size_t>(weights[i]), values[i]);
    }
    return out;
}

double expanded_percentile(std::vector<double> expanded, int k) {
    std::sort(expanded.begin(), expanded.end());
    const auto n = static_cast<long long>(expanded.size());
    long long idx = (k * n + 99) / 100 - 1;
    idx = std::clamp<long long>(idx, 0, n - 1);
    return expanded[static_cast<std::size_t>(idx)];
}

double expanded_mean(std::span<const double> expanded) {
    long double s = 0.0L;
    for (const double v : expanded) {
        s += v;
    }
    return static_cast<double>(s / static_cast<long double>(expanded.size()));
}

std::vector<std::vector<std::string>> read_csv_rows(const std::filesystem::path& path) {
    std::ifstream in(path);
    std::vector<std::vector<std::string>> rows;
    std::string line;
    while (std::getline(in, line)) {
        std::vector<std::string> fields;
        std::stringstream ss(line);
        std::string f;
        while (std::getline(ss, f, ',')) {
            fields.push_back(f);
        }
        if (!line.empty() && line.back() == ',') {
            fields.emplace_back();
        }
        rows.push_back(std::move(fields));
    }
    return rows;
}

namespace {

bool as_number(const std::string& s, double& out) {
    if (s == "inf") {
        out = std::numeric_limits<double>::infinity();
        return true;
    }
    if (s == "-inf") {
        out = -std::numeric_limits<double>::infinity();
        return true;
    }
    const auto r = std::from_chars(s.data(), s.data() + s.size(), out);
    return r.ec == std::errc() && r.ptr == s.data() + s.size();
}

}  // namespace

CsvDiff compare_csv(const std::filesystem::path& actual, const std::filesystem::path& expected,
                    double rel_tol) {
    CsvDiff d;
    if (!std::filesystem::exists(actual)) {
        return {false, "missing " + actual.string()};
    }
    const auto a = read_csv_rows(actual);
    const auto e = read_csv_rows(expected);
    const auto name = expected.filename().string();
    if (a.size() != e.size()) {
        return {false, name + ": row count " + std::to_string(a.size()) + " vs " +
                           std::to_string(e.size())};
    }
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i].size() != e[i].size()) {
            return {false, name + ": field count differs on line " + std::to_string(i + 1)};
        }
        for (std::size_t j = 0; j < a[i].size(); ++j) {
            if (a[i][j] == e[i][j]) {
                continue;
            }
            double x = 0.0;
            double y = 0.0;
            if (as_number(a[i][j], x) && as_number(e[i][j], y) &&
                std::abs(x - y) <= rel_tol * std::max(1.0, std::abs(y))) {
                continue;
            }
            return {false, name + " line " + std::to_string(i + 1) + ": '" + a[i][j] + "' vs '" +
                               e[i][j] + "'"};
        }
    }
    return d;
}

}  // namespace mobex::testing
