#include "ipp/geometry.hpp"

#include <algorithm>
#include <limits>

#include "ipp/errors.hpp"

namespace ipp {

namespace {

double cross(const Vec2& o, const Vec2& a, const Vec2& b) {
    return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

bool on_segment(const Vec2& a, const Vec2& b, const Vec2& p) {
    return std::min(a.x, b.x) - 1e-12 <= p.x && p.x <= std::max(a.x, b.x) + 1e-12 &&
           std::min(a.y, b.y) - 1e-12 <= p.y && p.y <= std::max(a.y, b.y) + 1e-12;
}

int sign(double v) { return (v > 1e-12) - (v < -1e-12); }

}  // namespace

bool segments_intersect(const Vec2& a, const Vec2& b, const Vec2& c, const Vec2& d) {
    const int d1 = sign(cross(c, d, a));
    const int d2 = sign(cross(c, d, b));
    const int d3 = sign(cross(a, b, c));
    const int d4 = sign(cross(a, b, d));
    if (d1 != d2 && d3 != d4) return true;
    if (d1 == 0 && on_segment(c, d, a)) return true;
    if (d2 == 0 && on_segment(c, d, b)) return true;
    if (d3 == 0 && on_segment(a, b, c)) return true;
    if (d4 == 0 && on_segment(a, b, d)) return true;
    return false;
}

bool point_in_polygon(const Vec2& p, const Polygon& poly) {
    bool inside = false;
    const size_t n = poly.size();
    for (size_t i = 0, j = n - 1; i < n; j = i++) {
        const Vec2& a = poly[i];
        const Vec2& b = poly[j];
        if ((a.y > p.y) != (b.y > p.y)) {
            const double xint = a.x + (p.y - a.y) / (b.y - a.y) * (b.x - a.x);
            if (p.x < xint) inside = !inside;
        }
    }
    return inside;
}

bool polygon_is_simple(const Polygon& poly) {
    const size_t n = poly.size();
    if (n < 3) return false;
    for (size_t i = 0; i < n; ++i) {
        const Vec2& a = poly[i];
        const Vec2& b = poly[(i + 1) % n];
        for (size_t j = i + 1; j < n; ++j) {
            // skip edges sharing a vertex
            if (j == i || (j + 1) % n == i || (i + 1) % n == j) continue;
            const Vec2& c = poly[j];
            const Vec2& d = poly[(j + 1) % n];
            if (segments_intersect(a, b, c, d)) return false;
        }
    }
    return true;
}

bool Region::contains(const Vec2& p) const {
    if (!bounds.contains(p)) return false;
    for (const auto& obs : obstacles) {
        if (point_in_polygon(p, obs)) return false;
    }
    return true;
}

void Region::validate() const {
    if (bounds.width() <= 0.0 || bounds.height() <= 0.0)
        throw ConfigError("region bounds must have positive width and height");
    for (const auto& obs : obstacles) {
        if (!polygon_is_simple(obs))
            throw ConfigError("obstacle polygon is degenerate or self-intersecting");
        for (const auto& v : obs) {
            if (!bounds.contains(v))
                throw ConfigError("obstacle polygon vertex lies outside region bounds");
        }
    }
}

bool segment_free(const Region& region, const Vec2& p, const Vec2& q) {
    if (!region.bounds.contains(p) || !region.bounds.contains(q)) return false;
    for (const auto& obs : region.obstacles) {
        if (point_in_polygon(p, obs) || point_in_polygon(q, obs)) return false;
        const size_t n = obs.size();
        for (size_t i = 0, j = n - 1; i < n; j = i++) {
            if (segments_intersect(p, q, obs[j], obs[i])) return false;
        }
    }
    return true;
}

double distance_to_polygon_boundary(const Vec2& p, const Polygon& poly) {
    double best = std::numeric_limits<double>::infinity();
    const size_t n = poly.size();
    for (size_t i = 0, j = n - 1; i < n; j = i++) {
        const Vec2& a = poly[j];
        const Vec2& b = poly[i];
        const Vec2 ab = b - a;
        const double len2 = ab.dot(ab);
        double t = len2 > 0.0 ? std::clamp((p - a).dot(ab) / len2, 0.0, 1.0) : 0.0;
        best = std::min(best, (p - (a + t * ab)).norm());
    }
    return best;
}

}  // namespace ipp
