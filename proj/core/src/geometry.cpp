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

#include "mobex/geometry.h"

#include "mobex/error.h"

#include <algorithm>
#include <cmath>
#include <limits>

namespace mobex {

namespace {

std::span<const Point> open_view(std::span<const Point> ring) {
    if (ring.size() >= 2 && ring.front() == ring.back()) {
        return ring.first(ring.size() - 1);
    }
    return ring;
}

Ring closed(std::vector<Point> open) {
    if (!open.empty()) {
        open.push_back(open.front());
    }
    return open;
}

double cross(const Point& o, const Point& a, const Point& b) {
    return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

template <class Inside, class Cut>
std::vector<Point> clip_pass(const std::vector<Point>& in, Inside inside, Cut cut) {
    std::vector<Point> out;
    if (in.empty()) {
        return out;
    }
    out.reserve(in.size() + 4);
    Point prev = in.back();
    bool prev_in = inside(prev);
    for (const Point& cur : in) {
        const bool cur_in = inside(cur);
        if (cur_in) {
            if (!prev_in) {
                out.push_back(cut(prev, cur));
            }
            out.push_back(cur);
        } else if (prev_in) {
            out.push_back(cut(prev, cur));
        }
        prev = cur;
        prev_in = cur_in;
    }
    return out;
}

auto cut_at_x(double x) {
    return [x](const Point& p, const Point& q) {
        const double t = (x - p.x) / (q.x - p.x);
        return Point{x, p.y + t * (q.y - p.y)};
    };
}

auto cut_at_y(double y) {
    return [y](const Point& p, const Point& q) {
        const double t = (y - p.y) / (q.y - p.y);
        return Point{p.x + t * (q.x - p.x), y};
    };
}

std::vector<Point> clip_x(std::vector<Point> pts, double xmin, double xmax) {
    pts = clip_pass(pts, [xmin](const Point& p) { return p.x >= xmin; }, cut_at_x(xmin));
    return clip_pass(pts, [xmax](const Point& p) { return p.x <= xmax; }, cut_at_x(xmax));
}

std::vector<Point> clip_y(std::vector<Point> pts, double ymin, double ymax) {
    pts = clip_pass(pts, [ymin](const Point& p) { return p.y >= ymin; }, cut_at_y(ymin));
    return clip_pass(pts, [ymax](const Point& p) { return p.y <= ymax; }, cut_at_y(ymax));
}

bool in_triangle(const Point& p, const Point& a, const Point& b, const Point& c) {
    return cross(a, b, p) >= 0.0 && cross(b, c, p) >= 0.0 && cross(c, a, p) >= 0.0;
}

}  // namespace

double ring_signed_area(std::span<const Point> ring) {
    const auto pts = open_view(ring);
    const std::size_t n = pts.size();
    if (n < 3) {
        return 0.0;
    }
    const double x0 = pts[0].x;
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const Point& prev = pts[(i + n - 1) % n];
        const Point& next = pts[(i + 1) % n];
        sum += (pts[i].x - x0) * (prev.y - next.y);
    }
    return -sum / 2.0;
}

Ring normalize_ring(Ring ring) {
    std::vector<Point> pts;
    pts.reserve(ring.size());
    for (const Point& p : ring) {
        if (!std::isfinite(p.x) || !std::isfinite(p.y)) {
            throw GeometryError("ring has a non-finite coordinate");
        }
        if (pts.empty() || !(pts.back() == p)) {
            pts.push_back(p);
        }
    }
    while (pts.size() >= 2 && pts.front() == pts.back()) {
        pts.pop_back();
    }
    if (pts.size() < 3) {
        throw GeometryError("ring has fewer than 3 distinct vertices");
    }
    if (ring_signed_area(pts) == 0.0) {
        throw GeometryError("ring encloses zero area");
    }
    return closed(std::move(pts));
}

Polygon normalize_polygon(Polygon polygon) {
    polygon.exterior = normalize_ring(std::move(polygon.exterior));
    for (auto& hole : polygon.holes) {
        hole = normalize_ring(std::move(hole));
    }
    return polygon;
}

double polygon_area(const Polygon& polygon) {
    const Polygon p = normalize_polygon(polygon);
    double area = std::abs(ring_signed_area(p.exterior));
    for (const auto& hole : p.holes) {
        area -= std::abs(ring_signed_area(hole));
    }
    return std::max(area, 0.0);
}

double polygon_area(std::span<const Polygon> polygons) {
    double total = 0.0;
    for (const auto& p : polygons) {
        total += polygon_area(p);
    }
    return total;
}

Box bounding_box(const Polygon& polygon) {
    Box b{std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity(),
          -std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
    for (const Point& p : polygon.exterior) {
        b.xmin = std::min(b.xmin, p.x);
        b.ymin = std::min(b.ymin, p.y);
        b.xmax = std::max(b.xmax, p.x);
        b.ymax = std::max(b.ymax, p.y);
    }
    return b;
}

Box bounding_box(std::span<const Polygon> polygons) {
    Box b{std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity(),
          -std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
    for (const auto& poly : polygons) {
        const Box pb = bounding_box(poly);
        b.xmin = std::min(b.xmin, pb.xmin);
        b.ymin = std::min(b.ymin, pb.ymin);
        b.xmax = std::max(b.xmax, pb.xmax);
        b.ymax = std::max(b.ymax, pb.ymax);
    }
    return b;
}

Ring clip_ring_to_box(std::span<const Point> ring, const Box& box) {
    const auto open = open_view(ring);
    std::vector<Point> pts(open.begin(), open.end());
    pts = clip_x(std::move(pts), box.xmin, box.xmax);
    pts = clip_y(std::move(pts), box.ymin, box.ymax);
    return closed(std::move(pts));
}

Ring clip_ring_to_band(std::span<const Point> ring, double ymin, double ymax) {
    const auto open = open_view(ring);
    std::vector<Point> pts(open.begin(), open.end());
    return closed(clip_y(std::move(pts), ymin, ymax));
}

Ring clip_ring_to_convex(std::span<const Point> ring, std::span<const Point> convex_ccw) {
    const auto open = open_view(ring);
    const auto clipper = open_view(convex_ccw);
    std::vector<Point> pts(open.begin(), open.end());
    for (std::size_t i = 0; i < clipper.size() && !pts.empty(); ++i) {
        const Point a = clipper[i];
        const Point b = clipper[(i + 1) % clipper.size()];
        pts = clip_pass(
            pts, [&](const Point& p) { return cross(a, b, p) >= 0.0; },
            [&](const Point& p, const Point& q) {
                const double dp = cross(a, b, p);
                const double dq = cross(a, b, q);
                const double t = dp / (dp - dq);
                return Point{p.x + t * (q.x - p.x), p.y + t * (q.y - p.y)};
            });
    }
    return closed(std::move(pts));
}

double clipped_area(const Polygon& polygon, const Box& box) {
    double area = std::abs(ring_signed_area(clip_ring_to_box(polygon.exterior, box)));
    for (const auto& hole : polygon.holes) {
        area -= std::abs(ring_signed_area(clip_ring_to_box(hole, box)));
    }
    return std::max(area, 0.0);
}

double clipped_area(std::span<const Polygon> polygons, const Box& box) {
    double area = 0.0;
    for (const auto& p : polygons) {
        area += clipped_area(p, box);
    }
    return area;
}

double cell_coverage(std::span<const Polygon> polygons, const Box& cell) {
    if (!(cell.width() > 0.0) || !(cell.height() > 0.0)) {
        throw ContractError("cell must have positive width and height");
    }
    for (const auto& p : polygons) {
        (void)normalize_polygon(p);
    }
    return std::clamp(clipped_area(polygons, cell) / cell.area(), 0.0, 1.0);
}

std::vector<Triangle> triangulate(std::span<const Point> ring) {
    const auto open = open_view(ring);
    std::vector<Point> pts(open.begin(), open.end());
    if (pts.size() < 3) {
        throw GeometryError("cannot triangulate a ring with fewer than 3 vertices");
    }
    if (ring_signed_area(pts) < 0.0) {
        std::reverse(pts.begin(), pts.end());
    }

    std::vector<std::size_t> idx(pts.size());
    for (std::size_t i = 0; i < idx.size(); ++i) {
        idx[i] = i;
    }

    std::vector<Triangle> out;
    out.reserve(pts.size());
    while (idx.size() > 3) {
        const std::size_t m = idx.size();
        bool clipped = false;
        for (std::size_t i = 0; i < m; ++i) {
            const Point& a = pts[idx[(i + m - 1) % m]];
            const Point& b = pts[idx[i]];
            const Point& c = pts[idx[(i + 1) % m]];
            const double turn = cross(a, b, c);
            if (turn < 0.0) {
                continue;
            }
            if (turn == 0.0) {
                // collinear vertex: drop it, no area lost
                idx.erase(idx.begin() + static_cast<std::ptrdiff_t>(i));
                clipped = true;
                break;
            }
            bool ear = true;
            for (std::size_t j = 0; j < m && ear; ++j) {
                const Point& p = pts[idx[j]];
                if (p == a || p == b || p == c) {
                    continue;
                }
                ear = !in_triangle(p, a, b, c);
            }
            if (ear) {
                out.push_back({a, b, c});
                idx.erase(idx.begin() + static_cast<std::ptrdiff_t>(i));
                clipped = true;
                break;
            }
        }
        if (!clipped) {
            throw GeometryError("ring is not simple; triangulation failed");
        }
    }
    const Triangle last{pts[idx[0]], pts[idx[1]], pts[idx[2]]};
    if (cross(last[0], last[1], last[2]) > 0.0) {
        out.push_back(last);
    }
    return out;
}

namespace {

double ring_overlap(std::span<const Point> subject, const std::vector<Triangle>& clip_tris) {
    double area = 0.0;
    for (const auto& tri : clip_tris) {
        area += std::abs(ring_signed_area(clip_ring_to_convex(subject, tri)));
    }
    return area;
}

struct Triangulated {
    Box box;
    std::vector<Triangle> exterior;
    std::vector<std::vector<Triangle>> holes;
};

}  // namespace

double intersection_area(std::span<const Polygon> a, std::span<const Polygon> b) {
    std::vector<Triangulated> tb;
    tb.reserve(b.size());
    for (const auto& poly : b) {
        Triangulated t;
        t.box = bounding_box(poly);
        t.exterior = triangulate(poly.exterior);
        for (const auto& hole : poly.holes) {
            t.holes.push_back(triangulate(hole));
        }
        tb.push_back(std::move(t));
    }

    // Inclusion-exclusion over rings: (A - Ah) n (B - Bh) with Ah in A, Bh in B.
    double total = 0.0;
    for (const auto& pa : a) {
        const Box abox = bounding_box(pa);
        for (const auto& t : tb) {
            if (!abox.intersects(t.box)) {
                continue;
            }
            double area = ring_overlap(pa.exterior, t.exterior);
            for (const auto& hole : pa.holes) {
                area -= ring_overlap(hole, t.exterior);
            }
            for (const auto& bh : t.holes) {
                area -= ring_overlap(pa.exterior, bh);
                for (const auto& hole : pa.holes) {
                    area += ring_overlap(hole, bh);
                }
            }
            total += std::max(area, 0.0);
        }
    }
    return total;
}

Polygon translated(const Polygon& polygon, double dx, double dy) {
    Polygon out = polygon;
    auto shift = [dx, dy](Ring& r) {
        for (auto& p : r) {
            p.x += dx;
            p.y += dy;
        }
    };
    shift(out.exterior);
    for (auto& h : out.holes) {
        shift(h);
    }
    return out;
}

}  // namespace mobex
