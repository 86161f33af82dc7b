#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ipp/geometry.hpp"

namespace ipp {

// Gridded 2-D wind vector field, bilinear between nodes. Immutable after
// construction; reads are thread-safe.
struct WindField {
    Vec2 origin;
    double spacing = 0.0;
    int nx = 0;
    int ny = 0;
    std::vector<Vec2> grid;  // row-major, index iy * nx + ix

    const Vec2& at_node(int ix, int iy) const { return grid[static_cast<size_t>(iy) * nx + ix]; }
    Vec2& at_node(int ix, int iy) { return grid[static_cast<size_t>(iy) * nx + ix]; }

    Rect coverage() const {
        return {origin, {origin.x + (nx - 1) * spacing, origin.y + (ny - 1) * spacing}};
    }

    double max_speed() const;
};

enum class WindKind { Uniform, Vortex, Shear, SeededSmoothNoise };

WindKind parse_wind_kind(const std::string& name);  // throws ConfigError on unknown names

struct WindParams {
    double speed = 10.0;      // m/s
    double from_deg = 45.0;   // compass bearing the wind blows FROM (uniform); 45 = northeast
    Vec2 center{0.0, 0.0};    // vortex center
    double radius = 0.0;      // vortex falloff radius; 0 = quarter of region diagonal
    double length = 0.0;      // noise correlation length; 0 = 5 grid cells
    std::uint64_t seed = 0;   // seeded-smooth-noise
};

// Deterministic for a fixed (kind, params) tuple; grid covers the region bounds.
WindField make_wind(WindKind kind, const WindParams& params, const Region& region, double spacing);

// Bilinear interpolation; exact at grid nodes. Throws DomainError outside coverage.
Vec2 wind_at(const WindField& field, const Vec2& p);

}  // namespace ipp
