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

#include "mobex/error.h"
#include "mobex/geojson.h"
#include "mobex/geometry.h"
#include "mobex/raster.h"
#include "mobex/text_io.h"
#include "mobex/zonal.h"

#include "oracles.h"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

namespace mobex {
namespace {

Polygon rect(double x0, double y0, double x1, double y1) {
    return Polygon{{{x0, y0}, {x1, y0}, {x1, y1}, {x0, y1}}, {}};
}

TractGeometry tract(std::string geoid, Polygon p) {
    return normalize_tract(TractGeometry{std::move(geoid), {std::move(p)}});
}

// 2 rows x 2 cols, unit cells, origin at 0. Row 0 is the top row.
ConcentrationGrid small_grid(std::vector<double> values, std::vector<std::uint8_t> valid = {}) {
    return ConcentrationGrid(0.0, 0.0, 1.0, 1.0, 2, 2, std::move(values), std::move(valid));
}

TEST(PolygonArea, Basics) {
    EXPECT_DOUBLE_EQ(polygon_area(rect(0, 0, 1, 1)), 1.0);
    EXPECT_DOUBLE_EQ(polygon_area(Polygon{{{0, 0}, {1, 0}, {0, 1}}, {}}), 0.5);
    EXPECT_THROW(polygon_area(Polygon{{{0, 0}, {1, 1}, {2, 2}}, {}}), GeometryError);
    EXPECT_THROW(polygon_area(Polygon{{{0, 0}, {1, 1}, {0, 0}}, {}}), GeometryError);
}

TEST(PolygonArea, HoleIsSubtractedAndOrientationIgnored) {
    Polygon p = rect(0, 0, 4, 4);
    p.holes.push_back({{1, 1}, {1, 2}, {2, 2}, {2, 1}});
    EXPECT_DOUBLE_EQ(polygon_area(p), 15.0);
    Polygon cw{{{0, 0}, {0, 1}, {1, 1}, {1, 0}}, {}};
    EXPECT_DOUBLE_EQ(polygon_area(cw), 1.0);
    const Ring r = normalize_ring({{0, 0}, {1, 0}, {1, 1}});
    EXPECT_EQ(r.front(), r.back());
}

TEST(CellCoverage, Examples) {
    const Box cell{0, 0, 1, 1};
    const Polygon same = rect(0, 0, 1, 1);
    const Polygon far = rect(5, 5, 6, 6);
    const Polygon left = rect(0, 0, 0.5, 1);
    EXPECT_DOUBLE_EQ(cell_coverage(std::span(&same, 1), cell), 1.0);
    EXPECT_DOUBLE_EQ(cell_coverage(std::span(&far, 1), cell), 0.0);
    EXPECT_DOUBLE_EQ(cell_coverage(std::span(&left, 1), cell), 0.5);
    EXPECT_THROW(cell_coverage(std::span(&same, 1), Box{0, 0, 0, 1}), ContractError);
}

TEST(CellCoverage, SumsToPolygonArea) {
    std::mt19937_64 rng(11);
    const ConcentrationGrid grid(0, 0, 1, 1, 20, 20, std::vector<double>(400, 1.0));
    for (int k = 0; k < 10; ++k) {
        const Polygon star = testing::random_star(rng, {10, 10}, 2.0, 8.0, 12, k % 2 == 0);
        const std::vector<Polygon> polys{star};
        double covered = 0.0;
        for (std::size_t r = 0; r < grid.n_rows(); ++r) {
            for (std::size_t c = 0; c < grid.n_cols(); ++c) {
                const double f = cell_coverage(polys, grid.cell_box(r, c));
                EXPECT_GE(f, 0.0);
                EXPECT_LE(f, 1.0);
                covered += f * grid.cell_box(r, c).area();
            }
        }
        const double area = polygon_area(polys);
        EXPECT_NEAR(covered, area, 1e-9 * area);
    }
}

TEST(Triangulate, AreaMatchesShoelace) {
    std::mt19937_64 rng(5);
    for (int k = 0; k < 20; ++k) {
        const Polygon star = testing::random_star(rng, {0, 0}, 1.0, 3.0, 9, false);
        double sum = 0.0;
        for (const auto& t : triangulate(star.exterior)) {
            sum += std::abs(ring_signed_area(t));
        }
        EXPECT_NEAR(sum, polygon_area(star), 1e-12 * sum);
    }
}

TEST(Raster, EsriRoundTripAndNodata) {
    const std::string text =
        "ncols 2\nnrows 2\nxllcorner 10\nyllcorner 20\ncellsize 0.5\nNODATA_value -9999\n"
        "1 2\n-9999 4\n";
    const auto g = parse_esri_ascii(text);
    EXPECT_EQ(g.n_rows(), 2u);
    EXPECT_FALSE(g.is_valid(1, 0));
    EXPECT_DOUBLE_EQ(g.value(0, 1), 2.0);
    const Box top_left = g.cell_box(0, 0);
    EXPECT_DOUBLE_EQ(top_left.ymin, 20.5);
    EXPECT_DOUBLE_EQ(top_left.xmin, 10.0);
    const auto again = parse_esri_ascii(to_esri_ascii(g));
    EXPECT_EQ(again.values(), g.values());
    EXPECT_EQ(again.valid_mask(), g.valid_mask());
    std::size_t r = 0;
    std::size_t c = 0;
    ASSERT_TRUE(g.locate({10.75, 20.25}, r, c));
    EXPECT_EQ(r, 1u);
    EXPECT_EQ(c, 1u);
    EXPECT_FALSE(g.locate({9.0, 20.0}, r, c));
}

TEST(Raster, RejectsBadGrids) {
    EXPECT_THROW(ConcentrationGrid(0, 0, 0, 1, 1, 1, {1.0}), SchemaError);
    EXPECT_THROW(ConcentrationGrid(0, 0, 1, 1, 2, 1, {1.0}), SchemaError);
    EXPECT_THROW(ConcentrationGrid(0, 0, 1, 1, 1, 1, {-1.0}), SchemaError);
    EXPECT_THROW(parse_esri_ascii("ncols 2\nnrows 1\ncellsize 1\n1 2\n"), ParseError);
    EXPECT_THROW(parse_esri_ascii("ncols 2\nnrows 1\nxllcorner 0\nyllcorner 0\ncellsize 1\n1\n"),
                 ParseError);
}

TEST(Raster, XyzFallback) {
    const auto dir = testing::scratch_dir("xyz");
    write_text_file(dir / "g.csv", "x,y,value\n0.5,0.5,3\n1.5,0.5,4\n0.5,1.5,5\n1.5,1.5,6\n");
    const auto g = read_grid(dir / "g.csv");
    ASSERT_EQ(g.n_rows(), 2u);
    ASSERT_EQ(g.n_cols(), 2u);
    EXPECT_DOUBLE_EQ(g.value(0, 0), 5.0);
    EXPECT_DOUBLE_EQ(g.value(1, 1), 4.0);
}

TEST(Zonal, SingleCellIdentity) {
    const auto g = small_grid({9.5, 1, 1, 1});
    EXPECT_DOUBLE_EQ(*zonal_weighted_mean(g, tract("17031000100", rect(0, 1, 1, 2))), 9.5);
}

TEST(Zonal, StraddlingTwoCells) {
    const auto g = small_grid({8, 10, 0, 0});
    EXPECT_DOUBLE_EQ(*zonal_weighted_mean(g, tract("17031000100", rect(0.5, 1.2, 1.5, 1.8))), 9.0);
}

TEST(Zonal, NodataAndOutsideAreExcluded) {
    const auto g = small_grid({8, 10, 3, 4}, {1, 1, 0, 0});
    EXPECT_FALSE(zonal_weighted_mean(g, tract("17031000100", rect(0, 0, 2, 1))).has_value());
    EXPECT_FALSE(zonal_weighted_mean(g, tract("17031000100", rect(5, 5, 6, 6))).has_value());
    // Half over nodata: only the valid half counts.
    EXPECT_DOUBLE_EQ(*zonal_weighted_mean(g, tract("17031000100", rect(0, 0.5, 1, 1.5))), 8.0);
}

TEST(Zonal, UniformFieldAndBounds) {
    const ConcentrationGrid uniform(0, 0, 1, 1, 5, 5, std::vector<double>(25, 7.8));
    const std::vector<TractGeometry> one{tract("17031000100", rect(0.3, 0.2, 4.1, 3.3))};
    const auto s = build_tract_surface(uniform, one, 2018);
    ASSERT_EQ(s.entries.size(), 1u);
    EXPECT_DOUBLE_EQ(s.entries.at("17031000100"), 7.8);

    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> u(5, 15);
    std::vector<double> v(400);
    for (auto& x : v) {
        x = u(rng);
    }
    const ConcentrationGrid g(0, 0, 1, 1, 20, 20, v);
    for (int k = 0; k < 10; ++k) {
        const auto t = tract("17031000100", testing::random_star(rng, {10, 10}, 1.0, 6.0, 10, false));
        const double m = *zonal_weighted_mean(g, t);
        EXPECT_GE(m, 5.0);
        EXPECT_LE(m, 15.0);
    }
}

TEST(Zonal, TranslationInvariant) {
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> u(5, 15);
    std::vector<double> v(400);
    for (auto& x : v) {
        x = u(rng);
    }
    const ConcentrationGrid g(0, 0, 1, 1, 20, 20, v);
    for (int k = 0; k < 10; ++k) {
        const Polygon star = testing::random_star(rng, {10, 10}, 1.0, 8.0, 11, true);
        const double a = *zonal_weighted_mean(g, tract("17031000100", star));
        const double dx = 1234.0;
        const double dy = -567.0;
        const double b = *zonal_weighted_mean(g.translated(dx, dy),
                                              tract("17031000100", translated(star, dx, dy)));
        EXPECT_NEAR(a, b, 1e-12 * a);
    }
}

TEST(Zonal, AgreesWithMonteCarlo) {
    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> u(5, 15);
    std::vector<double> v(100);
    for (auto& x : v) {
        x = u(rng);
    }
    const ConcentrationGrid g(0, 0, 1, 1, 10, 10, v);
    for (int k = 0; k < 3; ++k) {
        const Polygon star = testing::random_star(rng, {5, 5}, 1.0, 4.5, 9, k == 1);
        const std::vector<Polygon> polys{star};
        const double mc = testing::monte_carlo_zonal_mean(g, polys, 200000, 100 + k);
        const double exact = *zonal_weighted_mean(g, tract("17031000100", star));
        EXPECT_NEAR(exact, mc, 2e-3 * mc);
    }
}

TEST(Surface, ExcludesAndSortsAndRejectsDuplicates) {
    const auto g = small_grid({8, 10, 3, 4}, {1, 1, 0, 0});
    const std::vector<TractGeometry> ts{tract("17031000200", rect(0, 1, 1, 2)),
                                        tract("17031000100", rect(0, 0, 1, 1))};
    for (const unsigned threads : {1u, 4u}) {
        const auto s = build_tract_surface(g, ts, 2018, threads);
        EXPECT_EQ(s.entries.size(), 1u);
        ASSERT_EQ(s.excluded.size(), 1u);
        EXPECT_EQ(s.excluded[0], "17031000100");
        EXPECT_EQ(surface_to_csv(s), "geoid,year,pm25\n17031000200,2018,8\n");
    }
    const std::vector<TractGeometry> dup{ts[0], ts[0]};
    EXPECT_THROW(build_tract_surface(g, dup, 2018), SchemaError);
    EXPECT_THROW(build_tract_surface(g, std::vector<TractGeometry>{}, 2018), SchemaError);
}

TEST(Surface, CsvRoundTrip) {
    const auto dir = testing::scratch_dir("surface");
    TractSurface s;
    s.year = 2018;
    s.entries = {{"17031000100", 7.25}, {"17031000200", 10.0 / 3.0}};
    write_text_file(dir / "s.csv", surface_to_csv(s));
    const auto back = read_surface_csv(dir / "s.csv", 2018);
    EXPECT_EQ(back.entries, s.entries);
}

TEST(Tract, GeoidValidation) {
    EXPECT_THROW(validate_tract_geoid("1703100010"), MalformedGeocodeError);
    EXPECT_THROW(validate_tract_geoid("1703100010x"), MalformedGeocodeError);
    EXPECT_NO_THROW(validate_tract_geoid("17031000100"));
}

TEST(Urban, Classification) {
    const std::vector<Polygon> urban{rect(0, 0, 10, 10)};
    EXPECT_EQ(classify_urban(tract("17031000100", rect(1, 1, 2, 2)), urban), Stratum::urban);
    EXPECT_EQ(classify_urban(tract("17031000100", rect(20, 1, 22, 2)), urban), Stratum::rural);
    // 60% of the tract lies inside.
    EXPECT_EQ(classify_urban(tract("17031000100", rect(6, 0, 11, 1)), urban), Stratum::urban);
    // Exactly half counts as urban.
    EXPECT_EQ(classify_urban(tract("17031000100", rect(9, 0, 11, 1)), urban), Stratum::urban);
    EXPECT_EQ(classify_urban(tract("17031000100", rect(9.5, 0, 12, 1)), urban), Stratum::rural);
}

TEST(Urban, FractionMatchesMonteCarloArea) {
    std::mt19937_64 rng(17);
    const Polygon city = testing::random_star(rng, {0, 0}, 2.0, 5.0, 13, false);
    const Polygon t = testing::random_star(rng, {2, 1}, 1.0, 4.0, 11, false);
    const double f = urban_area_fraction(tract("17031000100", t), std::vector<Polygon>{city});
    const Box b = bounding_box(t);
    std::uniform_real_distribution<double> ux(b.xmin, b.xmax);
    std::uniform_real_distribution<double> uy(b.ymin, b.ymax);
    int in_t = 0;
    int in_both = 0;
    for (int i = 0; i < 400000; ++i) {
        const Point p{ux(rng), uy(rng)};
        if (testing::point_in_polygon(t, p)) {
            ++in_t;
            in_both += testing::point_in_polygon(city, p) ? 1 : 0;
        }
    }
    EXPECT_NEAR(f, static_cast<double>(in_both) / in_t, 5e-3);
}

TEST(Urban, MaskClassifiesEveryTractOnce) {
    const std::vector<TractGeometry> ts{tract("17031000100", rect(0, 0, 1, 1)),
                                        tract("17031000200", rect(5, 5, 6, 6))};
    const auto m = build_urban_mask(ts, {rect(0, 0, 2, 2)}, 2);
    ASSERT_EQ(m.classification.size(), 2u);
    EXPECT_EQ(m.classification.at("17031000100"), Stratum::urban);
    EXPECT_EQ(m.classification.at("17031000200"), Stratum::rural);
}

TEST(GeoJson, PolygonsMultiPolygonsAndErrors) {
    const std::string text = R"({"type":"FeatureCollection","features":[
      {"type":"Feature","properties":{"GEOID":"17031000100"},
       "geometry":{"type":"Polygon","coordinates":[[[0,0],[1,0],[1,1],[0,1],[0,0]]]}},
      {"type":"Feature","properties":{"GEOID":"17031000200"},
       "geometry":{"type":"MultiPolygon","coordinates":[[[[2,0],[3,0],[3,1],[2,0]]],
                                                        [[[4,0],[5,0],[5,1],[4,0]]]]}}]})";
    const auto f = parse_geojson(text);
    ASSERT_EQ(f.size(), 2u);
    EXPECT_EQ(*f[0].geoid, "17031000100");
    EXPECT_EQ(f[1].polygons.size(), 2u);
    EXPECT_THROW(parse_geojson("{"), ParseError);
    EXPECT_THROW(parse_geojson(R"({"type":"Feature","geometry":{"type":"Point","coordinates":[0,0]}})"),
                 ParseError);

    const auto dir = testing::scratch_dir("geojson");
    const std::vector<TractGeometry> ts{tract("17031000100", rect(0, 0, 1, 1))};
    write_text_file(dir / "t.geojson", tracts_to_geojson(ts));
    const auto back = read_tract_geojson(dir / "t.geojson");
    ASSERT_EQ(back.size(), 1u);
    EXPECT_DOUBLE_EQ(polygon_area(back[0].polygons), 1.0);
}

}  // namespace
}  // namespace mobex
