#include "ipp/rf.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "ipp/errors.hpp"

namespace ipp {

void RfSource::validate() const {
    if (frequency_hz <= 0.0) throw ConfigError("rf source frequency must be positive");
    if (shadowing_sigma_db < 0.0) throw ConfigError("shadowing sigma must be nonnegative");
    if (shadowing_length_m <= 0.0) throw ConfigError("shadowing length must be positive");
}

double path_loss_db(double d, double lambda, double gain_linear) {
    if (lambda <= 0.0) throw ConfigError("wavelength must be positive");
    if (gain_linear <= 0.0) throw ConfigError("linear gain must be positive");
    d = std::max(d, kMinPathLossDistance);
    const double denom = 4.0 * M_PI * d;
    return -10.0 * std::log10(gain_linear * lambda * lambda / (denom * denom));
}

ShadowField ShadowField::zero() { return ShadowField{}; }

double ShadowField::at(const Vec2& p) const {
    if (empty()) return 0.0;
    const double gx = (p.x - origin.x) / spacing;
    const double gy = (p.y - origin.y) / spacing;
    if (gx < -1e-9 || gy < -1e-9 || gx > nx - 1 + 1e-9 || gy > ny - 1 + 1e-9)
        throw DomainError("point outside shadow field coverage");
    int ix = std::clamp(static_cast<int>(gx), 0, nx - 2);
    int iy = std::clamp(static_cast<int>(gy), 0, ny - 2);
    const double tx = std::clamp(gx - ix, 0.0, 1.0);
    const double ty = std::clamp(gy - iy, 0.0, 1.0);
    auto g = [&](int x, int y) { return grid[static_cast<size_t>(y) * nx + x]; };
    return (1 - tx) * (1 - ty) * g(ix, iy) + tx * (1 - ty) * g(ix + 1, iy) +
           (1 - tx) * ty * g(ix, iy + 1) + tx * ty * g(ix + 1, iy + 1);
}

ShadowField make_shadow_field(const Region& region, double spacing, const RfSource& src) {
    src.validate();
    if (spacing <= 0.0) throw ConfigError("shadow field spacing must be positive");

    ShadowField f;
    f.origin = region.bounds.min;
    f.spacing = spacing;
    f.nx = std::max(2, static_cast<int>(std::ceil(region.bounds.width() / spacing - 1e-9)) + 1);
    f.ny = std::max(2, static_cast<int>(std::ceil(region.bounds.height() / spacing - 1e-9)) + 1);
    f.seed = src.seed;
    f.grid.assign(static_cast<size_t>(f.nx) * f.ny, 0.0);
    if (src.shadowing_sigma_db == 0.0) return f;

    std::mt19937_64 rng(src.seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (auto& v : f.grid) v = gauss(rng);

    // Moving Gaussian average with radius set by the correlation length, then
    // rescale the empirical std back to the requested sigma.
    const double sigma_cells = std::max(1.0, src.shadowing_length_m / spacing);
    const int half = std::max(1, static_cast<int>(std::ceil(3.0 * sigma_cells)));
    std::vector<double> kernel(2 * half + 1);
    double ksum = 0.0;
    for (int k = -half; k <= half; ++k) {
        kernel[k + half] = std::exp(-0.5 * k * k / (sigma_cells * sigma_cells));
        ksum += kernel[k + half];
    }
    for (auto& w : kernel) w /= ksum;
    auto reflect = [](int i, int n) {
        if (i < 0) i = -i;
        if (i >= n) i = 2 * n - 2 - i;
        return std::clamp(i, 0, n - 1);
    };
    std::vector<double> tmp(f.grid.size());
    for (int iy = 0; iy < f.ny; ++iy)
        for (int ix = 0; ix < f.nx; ++ix) {
            double acc = 0.0;
            for (int k = -half; k <= half; ++k)
                acc += kernel[k + half] * f.grid[static_cast<size_t>(iy) * f.nx + reflect(ix + k, f.nx)];
            tmp[static_cast<size_t>(iy) * f.nx + ix] = acc;
        }
    for (int iy = 0; iy < f.ny; ++iy)
        for (int ix = 0; ix < f.nx; ++ix) {
            double acc = 0.0;
            for (int k = -half; k <= half; ++k)
                acc += kernel[k + half] * tmp[static_cast<size_t>(reflect(iy + k, f.ny)) * f.nx + ix];
            f.grid[static_cast<size_t>(iy) * f.nx + ix] = acc;
        }

    double mean = 0.0;
    for (double v : f.grid) mean += v;
    mean /= static_cast<double>(f.grid.size());
    double var = 0.0;
    for (double v : f.grid) var += (v - mean) * (v - mean);
    var /= static_cast<double>(f.grid.size());
    const double scale = var > 0.0 ? src.shadowing_sigma_db / std::sqrt(var) : 0.0;
    for (auto& v : f.grid) v = (v - mean) * scale;
    return f;
}

double rf_truth(const Vec2& p, const RfSource& src, const ShadowField& shadow) {
    const double d = (p - src.position).norm();
    const double loss = path_loss_db(d, src.wavelength(), 1.0);
    return src.tx_power_dbm + src.gain_tx_dbi + src.gain_rx_dbi - loss + shadow.at(p);
}

}  // namespace ipp
