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

#include <array>
#include <span>
#include <vector>

namespace mobex {

struct Point {
    double x = 0.0;
    double y = 0.0;

    friend bool operator==(const Point&, const Point&) = default;
};

/// Closed ring: the first vertex is repeated as the last one.
using Ring = std::vector<Point>;

/// One exterior ring plus zero or more holes, all closed.
struct Polygon {
    Ring exterior;
    std::vector<Ring> holes;
};

/// Axis-aligned rectangle.
struct Box {
    double xmin = 0.0;
    double ymin = 0.0;
    double xmax = 0.0;
    double ymax = 0.0;

    double width() const { return xmax - xmin; }
    double height() const { return ymax - ymin; }
    double area() const { return width() * height(); }

    bool intersects(const Box& o) const {
        return xmin < o.xmax && o.xmin < xmax && ymin < o.ymax && o.ymin < ymax;
    }
};

using Triangle = std::array<Point, 3>;

/// Shoelace signed area of a ring, positive for counter-clockwise order.
/// Accepts open or closed rings; fewer than three vertices gives 0.
double ring_signed_area(std::span<const Point> ring);

/// Drops repeated consecutive vertices and closes the ring. Throws
/// GeometryError when fewer than three distinct vertices remain or the
/// enclosed area is zero.
Ring normalize_ring(Ring ring);

/// Normalizes every ring of the polygon in place (see normalize_ring).
Polygon normalize_polygon(Polygon polygon);

/// Exterior area minus hole areas. Throws GeometryError for degenerate rings.
double polygon_area(const Polygon& polygon);
double polygon_area(std::span<const Polygon> polygons);

Box bounding_box(const Polygon& polygon);
Box bounding_box(std::span<const Polygon> polygons);

/// Sutherland-Hodgman clip of a ring against a rectangle: four successive
/// half-plane passes. The result may contain zero-width slivers where a
/// concave input folds along a rectangle edge; those contribute no area.
Ring clip_ring_to_box(std::span<const Point> ring, const Box& box);

/// Clip against the horizontal band ymin <= y <= ymax only.
Ring clip_ring_to_band(std::span<const Point> ring, double ymin, double ymax);

/// Clip against a convex, counter-clockwise clip polygon.
Ring clip_ring_to_convex(std::span<const Point> ring, std::span<const Point> convex_ccw);

/// area(polygon intersect box), holes clipped separately and subtracted.
double clipped_area(const Polygon& polygon, const Box& box);
double clipped_area(std::span<const Polygon> polygons, const Box& box);

/// area(polygons intersect cell) / area(cell), in [0, 1].
double cell_coverage(std::span<const Polygon> polygons, const Box& cell);

/// Ear-clipping triangulation of a simple ring (no self-intersections).
/// Output triangles are counter-clockwise. Throws GeometryError if the ring
/// cannot be triangulated.
std::vector<Triangle> triangulate(std::span<const Point> ring);

/// Area of the overlap between two polygon sets. Each set's members are
/// assumed pairwise disjoint with holes nested inside their exterior.
double intersection_area(std::span<const Polygon> a, std::span<const Polygon> b);

/// Returns the ring translated by (dx, dy).
Polygon translated(const Polygon& polygon, double dx, double dy);

}  // namespace mobex
