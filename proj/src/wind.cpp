#include "ipp/wind.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "ipp/errors.hpp"

namespace ipp {

double WindField::max_speed() const {
    double best = 0.0;
    for (const auto& v : grid) best = std::max(best, v.norm());
    return best;
}

WindKind parse_wind_kind(const std::string& name) {
    if (name == "uniform") return WindKind::Uniform;
    if (name == "vortex") return WindKind::Vortex;
    if (name == "shear") return WindKind::Shear;
    if (name == "seeded-smooth-noise" || name == "noise") return WindKind::SeededSmoothNoise;
    throw ConfigError("unknown wind kind: " + name);
}

namespace {

// Gaussian blur of a scalar lattice, separable, reflecting at borders.
void gaussian_smooth(std::vector<double>& v, int nx, int ny, double sigma_cells) {
    const int half = std::max(1, static_cast<int>(std::ceil(3.0 * sigma_cells)));
    std::vector<double> kernel(2 * half + 1);
    double sum = 0.0;
    for (int k = -half; k <= half; ++k) {
        kernel[k + half] = std::exp(-0.5 * (k * k) / (sigma_cells * sigma_cells));
        sum += kernel[k + half];
    }
    for (auto& w : kernel) w /= sum;

    auto reflect = [](int i, int n) {
        if (i < 0) i = -i;
        if (i >= n) i = 2 * n - 2 - i;
        return std::clamp(i, 0, n - 1);
    };

    std::vector<double> tmp(v.size());
    for (int iy = 0; iy < ny; ++iy)
        for (int ix = 0; ix < nx; ++ix) {
            double acc = 0.0;
            for (int k = -half; k <= half; ++k)
                acc += kernel[k + half] * v[static_cast<size_t>(iy) * nx + reflect(ix + k, nx)];
            tmp[static_cast<size_t>(iy) * nx + ix] = acc;
        }
    for (int iy = 0; iy < ny; ++iy)
        for (int ix = 0; ix < nx; ++ix) {
            double acc = 0.0;
            for (int k = -half; k <= half; ++k)
                acc += kernel[k + half] * tmp[static_cast<size_t>(reflect(iy + k, ny)) * nx + ix];
            v[static_cast<size_t>(iy) * nx + ix] = acc;
        }
}

}  // namespace

WindField make_wind(WindKind kind, const WindParams& params, const Region& region, double spacing) {
    if (spacing <= 0.0) throw ConfigError("wind grid spacing must be positive");
    region.validate();

    WindField f;
    f.origin = region.bounds.min;
    f.spacing = spacing;
    f.nx = std::max(2, static_cast<int>(std::ceil(region.bounds.width() / spacing - 1e-9)) + 1);
    f.ny = std::max(2, static_cast<int>(std::ceil(region.bounds.height() / spacing - 1e-9)) + 1);
    f.grid.resize(static_cast<size_t>(f.nx) * f.ny);

    auto node_pos = [&](int ix, int iy) {
        return Vec2{f.origin.x + ix * spacing, f.origin.y + iy * spacing};
    };

    switch (kind) {
        case WindKind::Uniform: {
            const double bearing = params.from_deg * M_PI / 180.0;
            // compass bearing -> blow-toward direction in xy (x east, y north)
            const Vec2 v{-params.speed * std::sin(bearing), -params.speed * std::cos(bearing)};
            std::fill(f.grid.begin(), f.grid.end(), v);
            break;
        }
        case WindKind::Vortex: {
            const Vec2 c = (params.center.x == 0.0 && params.center.y == 0.0)
                               ? region.bounds.center()
                               : params.center;
            const double R =
                params.radius > 0.0 ? params.radius : 0.25 * region.bounds.diagonal();
            for (int iy = 0; iy < f.ny; ++iy)
                for (int ix = 0; ix < f.nx; ++ix) {
                    const Vec2 d = node_pos(ix, iy) - c;
                    const double r = d.norm();
                    if (r < 1e-12) {
                        f.at_node(ix, iy) = {0.0, 0.0};
                    } else {
                        const double s = params.speed * r / (r + R);
                        f.at_node(ix, iy) = {-s * d.y / r, s * d.x / r};
                    }
                }
            break;
        }
        case WindKind::Shear: {
            const double cy = region.bounds.center().y;
            const double half = 0.5 * region.bounds.height();
            for (int iy = 0; iy < f.ny; ++iy) {
                const double u =
                    std::clamp((node_pos(0, iy).y - cy) / half, -1.0, 1.0) * params.speed;
                for (int ix = 0; ix < f.nx; ++ix) f.at_node(ix, iy) = {u, 0.0};
            }
            break;
        }
        case WindKind::SeededSmoothNoise: {
            std::mt19937_64 rng(params.seed);
            std::normal_distribution<double> gauss(0.0, 1.0);
            std::vector<double> wx(f.grid.size()), wy(f.grid.size());
            for (size_t i = 0; i < f.grid.size(); ++i) {
                wx[i] = gauss(rng);
                wy[i] = gauss(rng);
            }
            const double len = params.length > 0.0 ? params.length : 5.0 * spacing;
            const double sigma_cells = std::max(1.0, len / spacing);
            gaussian_smooth(wx, f.nx, f.ny, sigma_cells);
            gaussian_smooth(wy, f.nx, f.ny, sigma_cells);
            double maxmag = 1e-12;
            for (size_t i = 0; i < f.grid.size(); ++i)
                maxmag = std::max(maxmag, std::hypot(wx[i], wy[i]));
            const double scale = params.speed / maxmag;
            for (size_t i = 0; i < f.grid.size(); ++i)
                f.grid[i] = {wx[i] * scale, wy[i] * scale};
            break;
        }
    }
    return f;
}

Vec2 wind_at(const WindField& field, const Vec2& p) {
    const Rect cov = field.coverage();
    if (!cov.contains(p)) throw DomainError("point outside wind field coverage");
    double gx = (p.x - field.origin.x) / field.spacing;
    double gy = (p.y - field.origin.y) / field.spacing;
    int ix = std::min(static_cast<int>(gx), field.nx - 2);
    int iy = std::min(static_cast<int>(gy), field.ny - 2);
    ix = std::max(ix, 0);
    iy = std::max(iy, 0);
    const double tx = gx - ix;
    const double ty = gy - iy;
    const Vec2& v00 = field.at_node(ix, iy);
    const Vec2& v10 = field.at_node(ix + 1, iy);
    const Vec2& v01 = field.at_node(ix, iy + 1);
    const Vec2& v11 = field.at_node(ix + 1, iy + 1);
    return {(1 - tx) * (1 - ty) * v00.x + tx * (1 - ty) * v10.x + (1 - tx) * ty * v01.x +
                tx * ty * v11.x,
            (1 - tx) * (1 - ty) * v00.y + tx * (1 - ty) * v10.y + (1 - tx) * ty * v01.y +
                tx * ty * v11.y};
}

}  // namespace ipp
