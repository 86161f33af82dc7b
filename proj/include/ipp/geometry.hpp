#pragma once

#include <cmath>
#include <vector>

namespace ipp {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
    Vec2 operator*(double s) const { return {x * s, y * s}; }
    double dot(const Vec2& o) const { return x * o.x + y * o.y; }
    double norm() const { return std::hypot(x, y); }
};

inline Vec2 operator*(double s, const Vec2& v) { return v * s; }

struct Rect {
    Vec2 min;
    Vec2 max;

    double width() const { return max.x - min.x; }
    double height() const { return max.y - min.y; }
    Vec2 center() const { return {(min.x + max.x) * 0.5, (min.y + max.y) * 0.5}; }
    double diagonal() const { return (max - min).norm(); }
    bool contains(const Vec2& p) const {
        return p.x >= min.x && p.x <= max.x && p.y >= min.y && p.y <= max.y;
    }
};

using Polygon = std::vector<Vec2>;

// Bounded planar region: an axis-aligned rectangle minus polygonal holes.
struct Region {
    Rect bounds;
    std::vector<Polygon> obstacles;

    // Inside the bounds and outside every obstacle.
    bool contains(const Vec2& p) const;
    void validate() const;  // throws ConfigError on degenerate geometry
};

bool point_in_polygon(const Vec2& p, const Polygon& poly);
bool segments_intersect(const Vec2& a, const Vec2& b, const Vec2& c, const Vec2& d);
bool polygon_is_simple(const Polygon& poly);

// True iff the segment pq stays inside the region's bounds and does not
// touch any obstacle (endpoints inside an obstacle count as a hit).
bool segment_free(const Region& region, const Vec2& p, const Vec2& q);

// Distance from p to the polygon boundary (edges).
double distance_to_polygon_boundary(const Vec2& p, const Polygon& poly);

}  // namespace ipp
